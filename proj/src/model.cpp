#include "openlab/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "openlab/errors.hpp"

namespace openlab {

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.what << " (" << v.lhs << " vs " << v.rhs << "); ";
    return os.str();
}

ValidationReport validate(const EnvParams& p) {
    ValidationReport r;
    auto need = [&](bool cond, const char* what, double lhs, double rhs) {
        if (!cond || !std::isfinite(lhs)) r.violations.push_back({what, lhs, rhs});
    };
    need(p.hbar > 0, "hbar > 0", p.hbar, 0);
    need(p.m > 0, "m > 0", p.m, 0);
    need(p.nu >= 0, "nu >= 0", p.nu, 0);
    need(p.d0 >= 0, "d0 >= 0", p.d0, 0);
    need(p.d2 >= 0, "d2 >= 0", p.d2, 0);
    need(p.lambda >= 0, "lambda >= 0", p.lambda, 0);
    need(p.kB > 0, "kB > 0", p.kB, 0);
    need(std::isfinite(p.xi), "xi finite", p.xi, 0);
    need(std::isfinite(p.f), "f finite", p.f, 0);
    if (p.d0 >= 0 && p.d2 >= 0) {
        double lhs = p.m * p.nu, rhs = std::sqrt(2.0 * p.d0 * p.d2);
        need(lhs <= rhs, "Lindblad bound m*nu <= sqrt(2*d0*d2)", lhs, rhs);
    }
    return r;
}

EnvParams make_params(const EnvParams& p, bool allow_non_lindblad) {
    auto r = validate(p);
    if (allow_non_lindblad)
        std::erase_if(r.violations, [](const Violation& v) { return v.what.starts_with("Lindblad"); });
    if (!r.ok()) throw DomainError("invalid parameters: " + r.str());
    return p;
}

double xd2_rate(const EnvParams& p) {
    return (p.d0 + p.d2 * p.nu * p.nu - 2.0 * p.m * p.nu * p.xi) / (2.0 * p.hbar);
}

double inv_ell_dec2(const EnvParams& p) {
    if (p.nu == 0.0) throw SingularLimit("decoherence length undefined for nu = 0");
    double v = xd2_rate(p) / p.nu;
    if (!(v > 0.0)) throw DomainError("1/ell_dec^2 = " + std::to_string(v) + " is not positive");
    return v;
}

double decoherence_length(const EnvParams& p) { return 1.0 / std::sqrt(inv_ell_dec2(p)); }

double drift_wavenumber(const EnvParams& p) {
    if (p.nu == 0.0) throw SingularLimit("drift wavenumber undefined for nu = 0");
    return p.f / (p.hbar * p.nu);
}

double quantum_temperature(const EnvParams& p) {
    return p.hbar * p.hbar * inv_ell_dec2(p) / (p.m * p.kB);
}

EnvParams ScaledParams::env() const {
    EnvParams p;
    double g2 = g * g;
    p.hbar = hbar;
    p.m = m;
    p.kB = kB;
    p.lambda = lambda;
    p.d0 = g2 * tilde_d0;
    p.d2 = g2 * tilde_d2;
    p.nu = g2 * tilde_nu;
    p.xi = g2 * tilde_xi;
    p.f = g2 * tilde_f;
    return p;
}

double limit_decoherence_length(const ScaledParams& s) {
    if (!(s.tilde_d0 > 0 && s.tilde_nu > 0)) throw DomainError("ell* needs tilde_d0 > 0 and tilde_nu > 0");
    return std::sqrt(2.0 * s.hbar * s.tilde_nu / s.tilde_d0);
}

namespace {

const char* kKeys[] = {"hbar", "m", "nu", "d0", "d2", "xi", "f", "lambda", "kB"};

double* field(EnvParams& p, const std::string& k) {
    if (k == "hbar") return &p.hbar;
    if (k == "m") return &p.m;
    if (k == "nu") return &p.nu;
    if (k == "d0") return &p.d0;
    if (k == "d2") return &p.d2;
    if (k == "xi") return &p.xi;
    if (k == "f") return &p.f;
    if (k == "lambda") return &p.lambda;
    if (k == "kB") return &p.kB;
    return nullptr;
}

}  // namespace

EnvParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("parameter file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("parameter file must hold a flat JSON object");
    EnvParams p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        double* dst = field(p, it.key());
        if (!dst) throw DomainError("unknown parameter key '" + it.key() + "'");
        if (!it.value().is_number()) throw DomainError("parameter '" + it.key() + "' must be a number");
        *dst = it.value().get<double>();
    }
    return p;
}

EnvParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open parameter file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return params_from_json(ss.str());
}

std::string params_to_json(const EnvParams& p) {
    nlohmann::ordered_json j;
    EnvParams c = p;
    for (const char* k : kKeys) j[k] = *field(c, k);
    return j.dump();
}

std::string params_hash(const EnvParams& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : params_to_json(p)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace openlab
