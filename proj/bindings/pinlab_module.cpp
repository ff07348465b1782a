#include <pybind11/pybind11.h>
PYBIND11_MODULE(_pinlab, m) { m.doc() = "placeholder"; }
