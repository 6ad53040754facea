#pragma once

#include <string_view>
#include <vector>

#include "utm/contour.hpp"

namespace utm {

struct Box {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

struct ZeroCount {
    int count = 0;
    Box box;              ///< box actually used
    bool perturbed = false;
    double min_modulus = 0.0;  ///< min |scaled Δ| seen on the boundary
};

/// Winding number of Δ around the box boundary. A box whose boundary
/// passes too close to a zero is grown slightly and the new box reported.
ZeroCount count_zeros(const Box& box);

enum class Region { PlusSector1, PlusSector2, MinusSector, Origin, Elsewhere };

std::string_view to_string(Region r);
Region classify(cplx lambda);

struct ZeroRecord {
    cplx location{0.0};
    int multiplicity = 1;
    double residual = 0.0;  ///< |scaled Δ| at the refined point
    double derivative = 0.0;  ///< |scaled Δ′| at the refined point
    Region region = Region::Elsewhere;
    bool converged = true;
};

/// Zeros inside the box via recursive subdivision and Newton refinement.
std::vector<ZeroRecord> find_zeros_in_box(const Box& box);

/// Zeros with |λ| ≤ R, ordered by modulus then argument.
std::vector<ZeroRecord> find_zeros(double R);

struct ClearanceReport {
    double min_distance = 0.0;
    cplx nearest_zero{0.0};
    double margin = 0.0;
    bool passed = true;
};

/// Smallest distance from a non-origin zero to the finite-interval Γ⁺ ∪ Γ⁻
/// truncated at R.
ClearanceReport certify_contour_clearance(const std::vector<ZeroRecord>& zeros, double R, double margin);

}  // namespace utm
