#include "qbm/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace qbm {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(Error::Code::non_positive_parameter,
                    std::string("non-positive parameter: ") + field);
    }
}

double frequency_from_json(const nlohmann::json& j, const char* field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_object() && j.contains("sqrt") && j["sqrt"].is_number()) {
        double arg = j["sqrt"].get<double>();
        if (arg < 0.0) {
            throw Error(Error::Code::config_error,
                        std::string(field) + ": negative sqrt argument");
        }
        return std::sqrt(arg);
    }
    throw Error(Error::Code::config_error,
                std::string(field) + ": expected a number or {\"sqrt\": x}");
}

} // namespace

const Ensemble& validate(const Ensemble& e) {
    require_positive(e.central.mass_big_m, "mass_M");
    require_positive(e.central.omega_big, "omega_big");
    if (e.oscillators.empty()) {
        throw Error(Error::Code::empty_environment, "ensemble has no oscillators");
    }
    for (std::size_t k = 0; k < e.oscillators.size(); ++k) {
        const auto& osc = e.oscillators[k];
        require_positive(osc.mass_m, "mass_m");
        require_positive(osc.omega, "omega");
        if (!std::isfinite(osc.coupling_g)) {
            throw Error(Error::Code::non_positive_parameter, "coupling_g: not finite");
        }
    }
    require_positive(e.bath.beta, "beta");
    const double phi = e.trajectory.phi;
    if (!(phi >= 0.0 && phi <= std::numbers::pi / 2)) {
        throw Error(Error::Code::phi_out_of_range, "phi must lie in [0, pi/2]");
    }
    if (!std::isfinite(e.trajectory.y) || !std::isfinite(e.trajectory.y_prime)) {
        throw Error(Error::Code::non_positive_parameter, "trajectory amplitude not finite");
    }
    return e;
}

Ensemble load_ensemble_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(Error::Code::config_error, std::string("config parse: ") + ex.what());
    }

    try {
        Ensemble e;
        const auto& central = doc.at("central");
        if (central.contains("mass_M")) e.central.mass_big_m = central["mass_M"].get<double>();
        e.central.omega_big = frequency_from_json(central.at("omega_big"), "central.omega_big");

        for (const auto& o : doc.at("oscillators")) {
            EnvOscillator osc;
            if (o.contains("mass_m")) osc.mass_m = o["mass_m"].get<double>();
            osc.omega = frequency_from_json(o.at("omega"), "oscillators[].omega");
            if (o.contains("coupling_g")) osc.coupling_g = o["coupling_g"].get<double>();
            e.oscillators.push_back(osc);
        }

        e.bath.beta = doc.at("bath").at("beta").get<double>();

        const auto& traj = doc.at("trajectory");
        e.trajectory.y = traj.at("y").get<double>();
        e.trajectory.y_prime = traj.at("y_prime").get<double>();
        if (traj.contains("phi")) e.trajectory.phi = traj["phi"].get<double>();

        return e;
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(Error::Code::config_error, std::string("config: ") + ex.what());
    }
}

Ensemble load_ensemble_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Error::Code::config_error, "cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_ensemble_json(buf.str());
}

} // namespace qbm
