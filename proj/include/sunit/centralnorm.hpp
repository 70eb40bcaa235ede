#pragma once

#include <cstddef>
#include <gmpxx.h>
#include <vector>

#include "sunit/matrix.hpp"
#include "sunit/real.hpp"

namespace sunit {

using RealVec = std::vector<Real>;

// y_l of the ascending sort, l = floor((m+1)/2) (1-based).
Real center(const RealVec& x);
// sum |y_l - y_i|, which equals min over u of sum |x_i - u|.
Real central_norm(const RealVec& x);
RealVec centralize(const RealVec& x);

// Coefficients writing x (with x_n = 0) as a combination of +-e_0, ..., +-e_{n-1},
// e_0 = e_1 + ... + e_{n-1}. Entry i of plus/minus belongs to e_i.
struct HullCoefficients {
    RealVec plus, minus;
};
HullCoefficients hull_coefficients(const RealVec& x);

// All left inverses of R: rows w_i - u_i * 1.
struct PseudoInverseFamily {
    RealMatrix W;                // inverse of R with deleted_row removed
    std::vector<RealVec> w_rows;  // length s, zero at deleted_row
    RealVec u;                   // centers of the w rows
    std::size_t deleted_row = 0;

    // (s-1) x s matrix with rows w_i - u_i * 1.
    RealMatrix realized() const;
};

PseudoInverseFamily pseudo_inverse_family(const RealMatrix& R);

struct NormReport {
    Real n_old;
    Real n_new;
    RealVec per_row;
    std::size_t argmax_row = 0;
    RealVec centers;
};

// Max row central norm and its first attaining index.
NormReport norm_of_rows(const std::vector<RealVec>& w_rows);
NormReport system_norm_new(const RealMatrix& R);
Real system_norm_old(const RealMatrix& R);

struct GeneralizedValuationSpec {
    std::vector<mpq_class> r;
    mpz_class q;                // lcm of the numerators of |r_i|
    std::vector<mpz_class> t;   // q / r_i, nonzero integers

    static GeneralizedValuationSpec make(std::vector<mpq_class> r);
};

// Row i of R scaled by r_i.
RealMatrix prime_log_matrix(const RealMatrix& R, const GeneralizedValuationSpec& spec);
// min over u of sum_j |w_j - u / r_j|, through the expanded tuple w'.
Real generalized_row_norm(const RealVec& w, const GeneralizedValuationSpec& spec);
Real generalized_system_norm(const RealMatrix& R_primed, const GeneralizedValuationSpec& spec);

}  // namespace sunit
