#ifndef QBM_FRACTION_HPP
#define QBM_FRACTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm::fraction {

// Parity of the reduced frequency ratio omega/Omega = num/den decides which
// simultaneous-multiple-of-pi condition can be met:
//   even_class: exactly one of num, den even  ->  t on even multiples only
//   odd_odd:    both odd                      ->  every multiple of den*pi/Omega
enum class ParityClass { even_class, odd_odd };

struct ReducedFraction {
    std::int64_t num = 1; // omega side
    std::int64_t den = 1; // Omega side
    ParityClass parity = ParityClass::odd_odd;
};

ReducedFraction reduce_ratio(std::int64_t omega_num, std::int64_t omega_den);

// Best continued-fraction convergent of `ratio` with denominator <= max_den,
// if it lies within eps; absence is a value, not an error.
std::optional<ReducedFraction> rationalize(double ratio, std::int64_t max_den,
                                           double eps);

// t_min = coeff * pi / Omega with integer coeff: den (odd_odd) or 2*den
// (even_class).  Kept as an integer so lattice multiples stay exact.
std::int64_t t_min_coefficient(const ReducedFraction& f);
double t_min(double omega_big, const ReducedFraction& f);

// Exact lattice of marker recurrences t_p = p * t_min, enumerable on demand.
struct FrequencyRelation {
    ReducedFraction fraction;
    double omega_big = 1.0;
    std::int64_t coeff = 1; // t_min = coeff * pi / omega_big

    double t_min() const;
    double time_at(std::int64_t p) const; // p >= 1
    std::vector<double> times(int count) const;
};

FrequencyRelation make_relation(double omega_big, const ReducedFraction& f);

// First `count` lattice times p * t_min, p = 1..count.
std::vector<double> non_objectivity_times(double omega_big,
                                          const ReducedFraction& f, int count);

struct FamilyMember {
    double omega;
    std::int64_t num;   // formula numerator before reduction
    std::int64_t den;   // formula denominator before reduction
    // true when the reduced ratio has a strictly smaller t_min than the
    // family's nominal one (the family lattice is then a sublattice of the
    // member's own)
    bool reduces_below_family;
};

// Frequencies sharing one nominal t_min:
//   even_class: omega_p = (2p / 2n_min) Omega,      p = 1..count
//   odd_odd:    omega_p = ((2p+1)/(2n_min+1)) Omega, p = 0..count-1
std::vector<FamilyMember> frequency_family(double omega_big, std::int64_t n_min,
                                           ParityClass parity, int count);

// Smallest t > 0 on every input lattice: lcm of the integer t_min
// coefficients, converted to time once at the end.
double common_recurrence(double omega_big,
                         const std::vector<ReducedFraction>& fractions);

} // namespace qbm::fraction

#endif
