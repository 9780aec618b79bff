// model.hpp: environment parameters, validation and derived scales

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace openlab {

struct EnvParams {
    double hbar{1.0};
    double m{1.0};
    double nu{0.0};      // friction rate
    double d0{0.0};      // coefficient of the x_d^2 decoherence term
    double d2{0.0};      // coefficient of the diffusion term
    double xi{0.0};
    double f{0.0};       // dragging force
    double lambda{0.0};  // delta potential strength
    double kB{1.0};
};

struct Violation {
    std::string what;
    double lhs{0.0};
    double rhs{0.0};
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

ValidationReport validate(const EnvParams& p);

// Validates and returns p. Throws DomainError listing every violation.
// The Lindblad bound can be waived for experiments outside the positive regime.
EnvParams make_params(const EnvParams& p, bool allow_non_lindblad = false);

// D = (d0 + d2 nu^2 - 2 m nu xi) / (2 hbar), coefficient of -x_d^2 in L
double xd2_rate(const EnvParams& p);
double inv_ell_dec2(const EnvParams& p);
double decoherence_length(const EnvParams& p);
double drift_wavenumber(const EnvParams& p);
double quantum_temperature(const EnvParams& p);

struct ScaledParams {
    double g{1.0};
    double tilde_d0{0.0};
    double tilde_d2{0.0};
    double tilde_nu{0.0};
    double tilde_xi{0.0};
    double tilde_f{0.0};
    double hbar{1.0};
    double m{1.0};
    double lambda{0.0};
    double kB{1.0};

    EnvParams env() const;
};

// ell* = sqrt(2 hbar tilde_nu / tilde_d0)
double limit_decoherence_length(const ScaledParams& s);

// JSON I/O. Unknown keys raise DomainError.
EnvParams params_from_json(const std::string& text);
EnvParams load_params(const std::string& path);
std::string params_to_json(const EnvParams& p);
// FNV-1a of the canonical JSON form, as 16 hex digits
std::string params_hash(const EnvParams& p);

}  // namespace openlab
