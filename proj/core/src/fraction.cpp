#include "qbm/fraction.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qbm::fraction {

namespace {

constexpr double pi = std::numbers::pi;

ParityClass classify(std::int64_t num, std::int64_t den) {
    const bool num_even = (num % 2 == 0);
    const bool den_even = (den % 2 == 0);
    return (num_even || den_even) ? ParityClass::even_class : ParityClass::odd_odd;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    const __int128 wide = static_cast<__int128>(a / g) * b;
    if (wide > static_cast<__int128>(INT64_MAX)) {
        throw std::overflow_error("common recurrence overflows 64-bit lattice arithmetic");
    }
    return static_cast<std::int64_t>(wide);
}

} // namespace

ReducedFraction reduce_ratio(std::int64_t omega_num, std::int64_t omega_den) {
    if (omega_num <= 0 || omega_den <= 0) {
        throw Error(Error::Code::non_positive_input,
                    "frequency ratio requires positive integers");
    }
    const std::int64_t g = std::gcd(omega_num, omega_den);
    ReducedFraction f;
    f.num = omega_num / g;
    f.den = omega_den / g;
    f.parity = classify(f.num, f.den);
    return f;
}

std::optional<ReducedFraction> rationalize(double ratio, std::int64_t max_den,
                                           double eps) {
    if (!(ratio > 0.0) || max_den < 1 || !(eps > 0.0)) {
        throw Error(Error::Code::non_positive_input,
                    "rationalize requires ratio > 0, max_den >= 1, eps > 0");
    }

    // continued-fraction convergents p_k/q_k; the last one with q <= max_den
    // is the best approximation among all convergents
    __int128 p_prev = 0, q_prev = 1;
    __int128 p_cur = 1, q_cur = 0;
    double x = ratio;
    std::int64_t best_p = 0, best_q = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(x);
        if (fl > 9.0e17) break;
        const __int128 a = static_cast<std::int64_t>(fl);
        const __int128 p_next = a * p_cur + p_prev;
        const __int128 q_next = a * q_cur + q_prev;
        if (q_next > max_den) break;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;
        if (p_cur > 0 && q_cur > 0 && p_cur < INT64_MAX) {
            best_p = static_cast<std::int64_t>(p_cur);
            best_q = static_cast<std::int64_t>(q_cur);
        }
        const double frac = x - fl;
        if (frac < 1e-15) break; // exact rational reached
        x = 1.0 / frac;
    }
    if (best_q == 0) return std::nullopt;
    if (std::abs(ratio - static_cast<double>(best_p) / static_cast<double>(best_q)) > eps) {
        return std::nullopt;
    }
    return reduce_ratio(best_p, best_q);
}

std::int64_t t_min_coefficient(const ReducedFraction& f) {
    return (f.parity == ParityClass::odd_odd) ? f.den : 2 * f.den;
}

double t_min(double omega_big, const ReducedFraction& f) {
    return static_cast<double>(t_min_coefficient(f)) * pi / omega_big;
}

double FrequencyRelation::t_min() const {
    return static_cast<double>(coeff) * pi / omega_big;
}

double FrequencyRelation::time_at(std::int64_t p) const {
    return static_cast<double>(coeff * p) * pi / omega_big;
}

std::vector<double> FrequencyRelation::times(int count) const {
    std::vector<double> out;
    out.reserve(count > 0 ? static_cast<std::size_t>(count) : 0);
    for (std::int64_t p = 1; p <= count; ++p) out.push_back(time_at(p));
    return out;
}

FrequencyRelation make_relation(double omega_big, const ReducedFraction& f) {
    FrequencyRelation rel;
    rel.fraction = f;
    rel.omega_big = omega_big;
    rel.coeff = t_min_coefficient(f);
    return rel;
}

std::vector<double> non_objectivity_times(double omega_big,
                                          const ReducedFraction& f, int count) {
    if (count < 1) {
        throw Error(Error::Code::non_positive_input, "count must be >= 1");
    }
    return make_relation(omega_big, f).times(count);
}

std::vector<FamilyMember> frequency_family(double omega_big, std::int64_t n_min,
                                           ParityClass parity, int count) {
    const bool odd = (parity == ParityClass::odd_odd);
    if ((odd && n_min < 0) || (!odd && n_min < 1)) {
        throw Error(Error::Code::non_positive_input,
                    "n_min >= 1 (even class) or >= 0 (odd-odd) required");
    }
    std::vector<FamilyMember> out;
    if (count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));

    // nominal family lattice: t_min = family_den * pi / Omega
    const std::int64_t family_den = odd ? (2 * n_min + 1) : (2 * n_min);
    for (std::int64_t k = 0; k < count; ++k) {
        const std::int64_t num = odd ? (2 * k + 1) : 2 * (k + 1);
        FamilyMember m;
        m.num = num;
        m.den = family_den;
        m.omega = static_cast<double>(num) / static_cast<double>(family_den) * omega_big;
        const ReducedFraction reduced = reduce_ratio(num, family_den);
        m.reduces_below_family = t_min_coefficient(reduced) < family_den;
        out.push_back(m);
    }
    return out;
}

double common_recurrence(double omega_big,
                         const std::vector<ReducedFraction>& fractions) {
    if (fractions.empty()) {
        throw Error(Error::Code::non_positive_input,
                    "common recurrence of an empty set");
    }
    std::int64_t coeff = 1;
    for (const auto& f : fractions) coeff = checked_lcm(coeff, t_min_coefficient(f));
    return static_cast<double>(coeff) * pi / omega_big;
}

} // namespace qbm::fraction
