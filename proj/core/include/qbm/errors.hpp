#ifndef QBM_ERRORS_HPP
#define QBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbm {

class Error : public std::runtime_error {
public:
    enum class Code {
        non_positive_parameter,
        empty_environment,
        phi_out_of_range,
        non_positive_input,
        dimension_too_small,
        dimension_mismatch,
        non_positive_density,
        resonance_unsupported,
        non_converged_step_size,
        not_converged_at_max_dim,
        invalid_range,
        unknown_figure,
        config_error,
    };

    Error(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

} // namespace qbm

#endif
