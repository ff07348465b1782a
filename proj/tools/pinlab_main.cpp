#include <cstdio>
int main() { std::puts("pinlab placeholder"); return 0; }
