#pragma once

#include "nlslab/field.hpp"

namespace nlslab {

/// M(u) = integral of |u|^2.
double mass(const Field& u);

/// ||u_x||_2^2 from the spectrum (Nyquist mode dropped, as in derivative()).
double gradient_sq(const Field& u);

/// E(u) = 1/2 ||u_x||^2 - 1/6 ||u||_6^6.
double energy(const Field& u);

/// ||u||_6^6 / (3 (||u||^2 / ||Q||^2)^2 ||u_x||^2), with ||Q||^2 taken from
/// the quadrature on u's grid. Throws DomainError on a zero denominator.
double gn_ratio(const Field& u);
double gn_ratio(const Field& u, double q_mass_sq);

}  // namespace nlslab
