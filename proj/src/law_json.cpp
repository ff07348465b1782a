#include "pinlab/law_json.hpp"

#include <cmath>
#include <map>

#include "pinlab/errors.hpp"

namespace pinlab {

using nlohmann::json;

json law_to_json(const ExcursionLaw& law) {
    json j;
    if (auto* brw = std::get_if<BiasedRw>(&law.repr())) {
        j["family"] = "biased_rw";
        j["p"] = brw->p;
    } else if (auto* gp = std::get_if<GeometricPrefactor>(&law.repr())) {
        j["family"] = "geometric_prefactor";
        j["b"] = gp->b;
        j["c"] = gp->c;
        j["kappa"] = gp->kappa;
    } else if (auto* pl = std::get_if<PowerLaw>(&law.repr())) {
        j["family"] = "power_law";
        j["c"] = pl->c;
        j["kappa"] = pl->kappa;
    } else if (auto* fs = std::get_if<FiniteSupport>(&law.repr())) {
        j["family"] = "finite_support";
        json w = json::object();
        for (auto [n, v] : fs->weights) w[std::to_string(n)] = v;
        j["weights"] = w;
        j["mass_inf"] = fs->mass_inf;
    } else {
        auto& rw = std::get<Reweighted>(law.repr());
        j["family"] = "reweighted";
        j["base"] = law_to_json(*rw.base);
        j["alpha"] = rw.alpha;
        j["mass_inf"] = rw.mass_inf;
    }
    return j;
}

ExcursionLaw law_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "biased_rw") return ExcursionLaw::biased_rw(j.at("p").get<double>());
    if (family == "geometric_prefactor") {
        double b = j.at("b").get<double>();
        double c = j.at("c").get<double>();
        if (j.value("normalize", false)) return ExcursionLaw::geometric_prefactor_normalized(b, c);
        return ExcursionLaw::geometric_prefactor(b, c, j.at("kappa").get<double>());
    }
    if (family == "power_law") {
        double c = j.at("c").get<double>();
        if (j.value("normalize", false)) return ExcursionLaw::power_law_normalized(c);
        return ExcursionLaw::power_law(c, j.at("kappa").get<double>());
    }
    if (family == "finite_support") {
        std::map<std::int64_t, double> weights;
        for (auto& [key, val] : j.at("weights").items())
            weights[std::stoll(key)] = val.get<double>();
        return ExcursionLaw::finite_support(weights, j.value("mass_inf", 0.0));
    }
    if (family == "reweighted") {
        ExcursionLaw base = law_from_json(j.at("base"));
        double alpha = j.at("alpha").get<double>();
        double mass_inf = j.at("mass_inf").get<double>();
        // Reconstruct through the public transforms.
        if (mass_inf == 0.0) return base.tilt(alpha);
        return base.partially_loosen(alpha);
    }
    throw InvalidLaw("unknown law family: " + family);
}

namespace {
json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}
}  // namespace

json report_to_json(const PhaseReport& rep) {
    json j;
    j["law"] = law_to_json(rep.law);
    j["beta"] = rep.beta;
    j["sigma"] = rep.sigma;
    j["transition_case"] = to_string(rep.transition_case);
    j["u_c_annealed"] = finite_or_null(rep.u_c_annealed);
    j["annealed_jump"] = finite_or_null(rep.annealed_jump);
    j["quenched_jump_lower_bound"] = finite_or_null(rep.quenched_jump_lower_bound);
    j["gap_lower_bound"] = finite_or_null(rep.gap_lower_bound);
    j["loosened_shift"] = finite_or_null(rep.loosened_shift);
    j["delta0"] = finite_or_null(rep.delta0);
    if (rep.quenched_estimated) {
        j["u_c_quenched_estimate"] = rep.u_c_quenched_estimate;
        j["u_c_quenched_uncertainty"] = rep.u_c_quenched_uncertainty;
    } else {
        j["u_c_quenched_estimate"] = nullptr;
        j["u_c_quenched_uncertainty"] = nullptr;
    }
    j["y"] = rep.y_estimated ? json(rep.y) : json(nullptr);
    j["sigma_scaling_extrapolated"] = rep.sigma_scaling_extrapolated;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}});
    }
    j["checks"] = checks;
    return j;
}

}  // namespace pinlab
