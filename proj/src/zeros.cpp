#include "utm/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "utm/spectral.hpp"

namespace utm {

namespace {

/// Δ(λ)·e^{iα^jλ} and its λ-derivative.
std::pair<cplx, cplx> scaled_with_derivative(cplx lambda, int j) {
    const cplx aj = alpha_pow(j);
    cplx v{0.0}, d{0.0};
    for (int k = 0; k < 3; ++k) {
        const cplx ak = alpha_pow(k);
        const cplx e = ak * std::exp(-I * ak * lambda + I * aj * lambda);
        v += e;
        d += e * (-I * ak + I * aj);
    }
    return {v, d};
}

struct EdgeWalk {
    double phase = 0.0;
    double min_modulus = std::numeric_limits<double>::infinity();
};

/// Continuous change of arg Δ along the segment a → b.
void walk_edge(cplx a, cplx b, EdgeWalk& w) {
    const double len = std::abs(b - a);
    double u = 0.0;
    double h = std::min(1.0, 0.05 / std::max(len, 1e-300));
    cplx p = a;
    int j = dominant_index(p);
    cplx vp = delta_scaled(p, j);
    w.min_modulus = std::min(w.min_modulus, std::abs(vp));
    while (u < 1.0) {
        const double step = std::min(h, 1.0 - u);
        const cplx q = a + (u + step) * (b - a);
        const cplx vq = delta_scaled(q, j);
        // Both samples carry the factor e^{iα^jλ}; divide its ratio back out.
        const double inc = std::arg(vq / vp * std::exp(-I * alpha_pow(j) * (q - p)));
        if (std::abs(inc) > pi / 8.0 && step * len > 1e-9) {
            h = 0.5 * step;
            continue;
        }
        w.phase += inc;
        u += step;
        p = q;
        j = dominant_index(p);
        vp = delta_scaled(p, j);
        w.min_modulus = std::min(w.min_modulus, std::abs(vp));
        if (std::abs(inc) < pi / 32.0) h = std::min(2.0 * step, 0.25 / std::max(len, 1e-300));
    }
}

ZeroCount wind(const Box& b) {
    EdgeWalk w;
    const cplx c00(b.x0, b.y0), c10(b.x1, b.y0), c11(b.x1, b.y1), c01(b.x0, b.y1);
    walk_edge(c00, c10, w);
    walk_edge(c10, c11, w);
    walk_edge(c11, c01, w);
    walk_edge(c01, c00, w);
    ZeroCount zc;
    zc.box = b;
    zc.min_modulus = w.min_modulus;
    zc.count = static_cast<int>(std::lround(w.phase / (2.0 * pi)));
    return zc;
}

}  // namespace

ZeroCount count_zeros(const Box& box) {
    if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) throw Error(ErrorCode::InvalidArgument, "degenerate box");
    const double size = std::max(box.x1 - box.x0, box.y1 - box.y0);
    // Zeros of Δ are simple away from 0, so |Δ′| is O(1) there and a small
    // boundary modulus means a zero within roughly that distance.
    const double threshold = 1e-3 * std::min(1.0, size);
    Box b = box;
    bool perturbed = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        ZeroCount zc = wind(b);
        if (zc.min_modulus > threshold) {
            zc.perturbed = perturbed;
            return zc;
        }
        const double grow = (0.013 + 0.007 * attempt) * size;
        b = Box{b.x0 - grow, b.x1 + 0.61 * grow, b.y0 - 0.83 * grow, b.y1 + grow};
        perturbed = true;
    }
    throw Error(ErrorCode::QuadratureFailure, "could not move the box boundary off a zero of Delta");
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::PlusSector1: return "plus_sector_1";
        case Region::PlusSector2: return "plus_sector_2";
        case Region::MinusSector: return "minus_sector";
        case Region::Origin: return "origin";
        case Region::Elsewhere: return "elsewhere";
    }
    return "elsewhere";
}

Region classify(cplx lambda) {
    if (std::abs(lambda) < 1e-6) return Region::Origin;
    if (std::abs(lambda) <= 1.0 || !((lambda * lambda * lambda).imag() > 0.0)) return Region::Elsewhere;
    const double a = std::arg(lambda);
    if (a > 0.0 && a < pi / 3.0) return Region::PlusSector1;
    if (a > 2.0 * pi / 3.0 && a < pi) return Region::PlusSector2;
    if (a > -2.0 * pi / 3.0 && a < -pi / 3.0) return Region::MinusSector;
    return Region::Elsewhere;
}

namespace {

ZeroRecord refine(const Box& box, int m) {
    ZeroRecord rec;
    rec.multiplicity = m;
    cplx z{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)};
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
        const auto [v, d] = scaled_with_derivative(z, dominant_index(z));
        if (v == cplx(0.0)) {
            ok = true;
            break;
        }
        if (d == cplx(0.0)) break;
        const cplx step = double(m) * v / d;
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
            ok = true;
            break;
        }
    }
    const double pad = 0.25 * std::max(box.x1 - box.x0, box.y1 - box.y0);
    const Box grown{box.x0 - pad, box.x1 + pad, box.y0 - pad, box.y1 + pad};
    if (!ok || !grown.contains(z)) {
        // Fall back to the box centre.
        z = {0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)};
        ok = false;
    }
    const auto [v, d] = scaled_with_derivative(z, dominant_index(z));
    rec.location = z;
    rec.residual = std::abs(v);
    rec.derivative = std::abs(d);
    rec.region = classify(z);
    rec.converged = ok;
    return rec;
}

void subdivide(const Box& b, int count, int depth, std::vector<ZeroRecord>& out) {
    if (count <= 0) return;
    const double w = b.x1 - b.x0, h = b.y1 - b.y0;
    if ((count == 1 && std::max(w, h) < 1.0) || std::max(w, h) < 0.05 || depth > 60) {
        out.push_back(refine(b, count));
        return;
    }
    // Off-centre cuts keep grid lines away from the symmetric zero pattern.
    const double size = std::max(w, h);
    for (double frac : {0.5123, 0.4567, 0.5631, 0.4211, 0.5937, 0.3803}) {
        Box lo = b, hi = b;
        if (w >= h) {
            lo.x1 = hi.x0 = b.x0 + frac * w;
        } else {
            lo.y1 = hi.y0 = b.y0 + frac * h;
        }
        const ZeroCount cl = wind(lo);
        if (cl.min_modulus <= 1e-3 * std::min(1.0, size)) continue;
        subdivide(lo, cl.count, depth + 1, out);
        subdivide(hi, count - cl.count, depth + 1, out);
        return;
    }
    out.push_back(refine(b, count));
}

}  // namespace

std::vector<ZeroRecord> find_zeros_in_box(const Box& box) {
    const ZeroCount total = count_zeros(box);
    std::vector<ZeroRecord> out;
    subdivide(total.box, total.count, 0, out);
    std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        const double ma = std::abs(a.location), mb = std::abs(b.location);
        if (std::abs(ma - mb) > 1e-9) return ma < mb;
        return std::arg(a.location) < std::arg(b.location);
    });
    return out;
}

std::vector<ZeroRecord> find_zeros(double R) {
    if (!(R > 1.0)) throw Error(ErrorCode::InvalidArgument, "zero search radius must exceed 1");
    const Box box{-R - 0.37, R + 0.41, -R - 0.29, R + 0.33};
    std::vector<ZeroRecord> all = find_zeros_in_box(box);
    std::vector<ZeroRecord> out;
    for (const auto& z : all)
        if (std::abs(z.location) <= R) out.push_back(z);
    return out;
}

namespace {

double distance(cplx z, const PathPiece& piece) {
    if (const auto* r = std::get_if<Ray>(&piece)) {
        const cplx dir = std::polar(1.0, r->angle);
        const double s = std::clamp(((z - r->base) * std::conj(dir)).real(), 0.0, r->length);
        return std::abs(z - (r->base + s * dir));
    }
    if (const auto* a = std::get_if<Arc>(&piece)) {
        const double lo = std::min(a->start_angle, a->end_angle), hi = std::max(a->start_angle, a->end_angle);
        const double phi = std::arg(z - a->center);
        for (double k : {-2.0, 0.0, 2.0}) {
            const double p = phi + k * pi;
            if (p >= lo && p <= hi) return std::abs(std::abs(z - a->center) - a->radius);
        }
        return std::min(std::abs(z - (a->center + std::polar(a->radius, lo))),
                        std::abs(z - (a->center + std::polar(a->radius, hi))));
    }
    const auto& s = std::get<LineSegment>(piece);
    const cplx d = s.b - s.a;
    const double u = std::clamp(((z - s.a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(z - (s.a + u * d));
}

}  // namespace

ClearanceReport certify_contour_clearance(const std::vector<ZeroRecord>& zeros, double R, double margin) {
    ClearanceReport rep;
    rep.margin = margin;
    rep.min_distance = std::numeric_limits<double>::infinity();
    ContourOptions co;
    co.R = R;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath path = build_contour(ProblemId::FiniteIntervalKdV, b, co);
        for (const auto& z : zeros) {
            if (z.region == Region::Origin) continue;
            for (const auto& piece : path.segments) {
                const double d = distance(z.location, piece);
                if (d < rep.min_distance) {
                    rep.min_distance = d;
                    rep.nearest_zero = z.location;
                }
            }
        }
    }
    rep.passed = rep.min_distance >= margin;
    return rep;
}

}  // namespace utm
