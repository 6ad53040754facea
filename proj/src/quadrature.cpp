#include "utm/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <queue>
#include <sstream>

namespace utm::quad {

namespace {

// Boost stores the non-negative half of each symmetric rule.
template <unsigned N>
Rule expand_gauss() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
            continue;
        }
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

Rule expand_kronrod21() {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& x = K::abscissa();
    const auto& wk = K::weights();
    const auto& wg = G::weights();
    Rule r;
    // Index 0 is the centre (Kronrod only for an even Gauss order); Gauss
    // points sit at odd indices with weight wg[i/2].
    r.nodes.push_back(0.0);
    r.weights.push_back(wk[0]);
    r.embedded_weights.push_back(0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double g = (i % 2 == 1) ? wg[i / 2] : 0.0;
        for (double s : {1.0, -1.0}) {
            r.nodes.push_back(s * x[i]);
            r.weights.push_back(wk[i]);
            r.embedded_weights.push_back(g);
        }
    }
    return r;
}

struct Panel {
    Interval iv;
    cplx value;
    double error;
};

struct ByError {
    bool operator()(const Panel& p, const Panel& q) const {
        if (p.error != q.error) return p.error < q.error;
        if (p.iv.piece != q.iv.piece) return p.iv.piece > q.iv.piece;
        return p.iv.a > q.iv.a;
    }
};

Panel evaluate_panel(const PieceIntegrand& f, const Interval& iv, long& evals) {
    const Rule& rule = gauss_kronrod21();
    const double mid = 0.5 * (iv.a + iv.b);
    const double half = 0.5 * (iv.b - iv.a);
    cplx k{0.0}, g{0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = mid + half * rule.nodes[i];
        const cplx v = f(iv.piece, u);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os.precision(17);
            os << "non-finite integrand at piece " << iv.piece << ", parameter " << u;
            throw Error(ErrorCode::QuadratureFailure, os.str());
        }
        k += rule.weights[i] * v;
        g += rule.embedded_weights[i] * v;
    }
    evals += static_cast<long>(rule.nodes.size());
    k *= half;
    g *= half;
    return {iv, k, std::abs(k - g)};
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static const Rule r10 = expand_gauss<10>();
    static const Rule r16 = expand_gauss<16>();
    static const Rule r20 = expand_gauss<20>();
    static const Rule r30 = expand_gauss<30>();
    switch (n) {
        case 10: return r10;
        case 16: return r16;
        case 20: return r20;
        case 30: return r30;
        default: throw Error(ErrorCode::InvalidArgument, "unsupported Gauss-Legendre order");
    }
}

const Rule& gauss_kronrod21() {
    static const Rule r = expand_kronrod21();
    return r;
}

AdaptiveResult integrate_panels(const PieceIntegrand& f, std::span<const Interval> initial,
                                const AdaptiveOptions& opts) {
    AdaptiveResult res;
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    cplx total{0.0};
    double total_err = 0.0;
    for (const auto& iv : initial) {
        if (iv.a == iv.b) continue;
        Panel p = evaluate_panel(f, iv, res.evaluations);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (!heap.empty() && total_err > target()) {
        if (panels + 1 > opts.max_panels) {
            res.converged = false;
            break;
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.iv.a + worst.iv.b);
        // Stop splitting panels that have shrunk to rounding level.
        if (mid == worst.iv.a || mid == worst.iv.b) {
            res.converged = false;
            break;
        }
        heap.pop();
        Panel left = evaluate_panel(f, {worst.iv.piece, worst.iv.a, mid}, res.evaluations);
        Panel right = evaluate_panel(f, {worst.iv.piece, mid, worst.iv.b}, res.evaluations);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) {
        if (p.iv.piece != q.iv.piece) return p.iv.piece < q.iv.piece;
        return p.iv.a < q.iv.a;
    });
    res.value = 0.0;
    res.abs_error = 0.0;
    for (const auto& p : all) {
        res.value += p.value;
        res.abs_error += p.error;
    }
    res.panels = static_cast<int>(all.size());
    return res;
}

AdaptiveResult integrate(const std::function<cplx(double)>& f, double a, double b,
                         const AdaptiveOptions& opts, int initial_panels) {
    std::vector<Interval> ivs;
    const int n = std::max(1, initial_panels);
    for (int i = 0; i < n; ++i) {
        ivs.push_back({0, a + (b - a) * i / n, a + (b - a) * (i + 1) / n});
    }
    return integrate_panels([&](int, double x) { return f(x); }, ivs, opts);
}

AdaptiveResult integrate_to_infinity(const std::function<cplx(double)>& f, double a,
                                     const AdaptiveOptions& opts, int initial_panels) {
    auto mapped = [&](int, double u) -> cplx {
        if (u >= 1.0) return 0.0;
        const double om = 1.0 - u;
        return f(a + u / om) / (om * om);
    };
    std::vector<Interval> ivs;
    const int n = std::max(1, initial_panels);
    for (int i = 0; i < n; ++i) ivs.push_back({0, double(i) / n, double(i + 1) / n});
    return integrate_panels(mapped, ivs, opts);
}

cplx composite_gauss(const std::function<cplx(double)>& f, double a, double b, int panels,
                     int order) {
    const Rule& rule = gauss_legendre(order);
    cplx sum{0.0};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        cplx s{0.0};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        }
        sum += 0.5 * h * s;
    }
    return sum;
}

}  // namespace utm::quad
