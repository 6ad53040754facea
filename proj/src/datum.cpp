#include "utm/datum.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace utm {

Domain domain_of(ProblemId p) {
    return p == ProblemId::FiniteIntervalKdV ? Domain::Interval : Domain::HalfLine;
}

std::string_view to_string(ProblemId p) {
    switch (p) {
        case ProblemId::FiniteIntervalKdV: return "FiniteIntervalKdV";
        case ProblemId::HalfLineKdV: return "HalfLineKdV";
        case ProblemId::HalfLineHeat: return "HalfLineHeat";
    }
    return "?";
}

std::string_view to_string(Domain d) { return d == Domain::Interval ? "interval" : "half-line"; }

ProblemId parse_problem(std::string_view s) {
    if (s == "fi" || s == "FiniteIntervalKdV") return ProblemId::FiniteIntervalKdV;
    if (s == "hl" || s == "HalfLineKdV") return ProblemId::HalfLineKdV;
    if (s == "heat" || s == "HalfLineHeat") return ProblemId::HalfLineHeat;
    throw Error(ErrorCode::InvalidArgument, "unknown problem '" + std::string(s) + "'");
}

namespace {

cplx horner(const std::vector<cplx>& p, cplx x) {
    cplx acc{0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& p) {
    std::vector<cplx> q;
    for (std::size_t n = 1; n < p.size(); ++n) q.push_back(double(n) * p[n]);
    return q;
}

/// ∫₀¹ p(x)e^{−sx}dx by the exponential series; fine for small |s|.
cplx interval_moment_series(const std::vector<cplx>& p, cplx s) {
    cplx total{0.0};
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] == cplx(0.0)) continue;
        cplx term{1.0};
        cplx sum{0.0};
        for (int m = 0; m < 80; ++m) {
            if (m > 0) term *= -s / double(m);
            const cplx add = term / double(n + m + 1);
            sum += add;
            if (m > 4 && std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        total += p[n] * sum;
    }
    return total;
}

}  // namespace

cplx ExpSum::operator()(double x) const {
    cplx total{0.0};
    for (const auto& t : terms) total += horner(t.poly, x) * std::exp(-t.rate * x);
    return total;
}

ExpSum ExpSum::derivative(int k) const {
    ExpSum out = *this;
    for (int j = 0; j < k; ++j) {
        for (auto& t : out.terms) {
            std::vector<cplx> q = poly_derivative(t.poly);
            q.resize(std::max(q.size(), t.poly.size()), 0.0);
            for (std::size_t n = 0; n < t.poly.size(); ++n) q[n] -= t.rate * t.poly[n];
            t.poly = std::move(q);
        }
    }
    return out;
}

ExpSum ExpSum::scaled(cplx c) const {
    ExpSum out = *this;
    for (auto& t : out.terms)
        for (auto& a : t.poly) a *= c;
    return out;
}

cplx ExpSum::half_line_transform(cplx lambda) const {
    cplx total{0.0};
    for (const auto& t : terms) {
        const cplx s = t.rate + I * lambda;
        if (s == cplx(0.0)) {
            throw Error(ErrorCode::TransformUndefined, "transform pole at lambda");
        }
        cplx inv_pow = 1.0 / s;
        double fact = 1.0;
        for (std::size_t n = 0; n < t.poly.size(); ++n) {
            if (n > 0) {
                fact *= double(n);
                inv_pow /= s;
            }
            total += t.poly[n] * fact * inv_pow;
        }
    }
    return total;
}

Scaled ExpSum::interval_transform(cplx lambda) const {
    Scaled total;
    for (const auto& t : terms) {
        const cplx s = t.rate + I * lambda;
        if (std::abs(s) <= 2.0) {
            total = total + Scaled::of(interval_moment_series(t.poly, s));
            continue;
        }
        // Integration by parts terminates after deg p + 1 steps.
        cplx at0{0.0}, at1{0.0};
        std::vector<cplx> p = t.poly;
        cplx inv_pow = 1.0 / s;
        while (!p.empty()) {
            at0 += p[0] * inv_pow;
            at1 += horner(p, 1.0) * inv_pow;
            inv_pow /= s;
            p = poly_derivative(p);
        }
        total = total + Scaled::of(at0) - Scaled::exp(-s) * at1;
    }
    return total;
}

Table Table::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open datum table '" + path + "'");
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        std::array<double, 5> row{};
        int n = 0;
        while (n < 5 && is >> row[n]) ++n;
        if (n == 0) continue;
        if (n != 5) {
            throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": expected 5 columns");
        }
        if (!t.x.empty() && row[0] <= t.x.back()) {
            throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": x not increasing");
        }
        t.x.push_back(row[0]);
        for (int k = 0; k < 4; ++k) t.d[k].push_back(row[k + 1]);
    }
    if (t.x.size() < 2) throw Error(ErrorCode::Io, path + ": need at least two rows");
    return t;
}

cplx Table::eval(int k, double xv) const {
    if (xv < x.front() || xv > x.back()) {
        throw Error(ErrorCode::InvalidArgument, "table evaluated outside its range");
    }
    auto it = std::upper_bound(x.begin(), x.end(), xv);
    std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1) - 1, x.size() - 2);
    const double h = x[i + 1] - x[i];
    const double u = (xv - x[i]) / h;
    const double y0 = d[k][i], y1 = d[k][i + 1];
    if (k == 3) return y0 + u * (y1 - y0);
    const double m0 = d[k + 1][i] * h, m1 = d[k + 1][i + 1] * h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 +
           (u3 - u2) * m1;
}

InitialDatum InitialDatum::from_exp_sum(Domain dom, ExpSum f, double decay_rate, std::string label) {
    InitialDatum d;
    d.domain_ = dom;
    d.decay_rate_ = decay_rate;
    d.label_ = std::move(label);
    d.rep_ = std::move(f);
    return d;
}

InitialDatum InitialDatum::from_table(Domain dom, Table t, double decay_rate, std::string label) {
    if (dom == Domain::Interval && (t.x.front() > 0.0 || t.x.back() < 1.0)) {
        throw Error(ErrorCode::DomainMismatch, "interval table must cover [0,1]");
    }
    if (dom == Domain::HalfLine && t.x.front() > 0.0) {
        throw Error(ErrorCode::DomainMismatch, "half-line table must start at 0");
    }
    InitialDatum d;
    d.domain_ = dom;
    d.decay_rate_ = decay_rate;
    d.label_ = std::move(label);
    d.rep_ = std::move(t);
    return d;
}

InitialDatum InitialDatum::from_functions(Domain dom, Derivatives derivs, double decay_rate,
                                          std::string label) {
    if (derivs.empty()) throw Error(ErrorCode::InvalidArgument, "datum needs a value function");
    InitialDatum d;
    d.domain_ = dom;
    d.decay_rate_ = decay_rate;
    d.label_ = std::move(label);
    d.rep_ = std::move(derivs);
    return d;
}

int InitialDatum::max_derivative() const {
    if (has_closed_form()) return 64;
    if (table()) return 3;
    return static_cast<int>(std::get<Derivatives>(rep_).size()) - 1;
}

cplx InitialDatum::derivative(int k, double x) const {
    if (k < 0 || k > max_derivative()) {
        throw Error(ErrorCode::MissingDerivative,
                    "derivative of order " + std::to_string(k) + " not available for " + label_);
    }
    if (const auto* e = exp_sum()) return k == 0 ? (*e)(x) : e->derivative(k)(x);
    if (const auto* t = table()) {
        if (domain_ == Domain::HalfLine && x > t->x.back()) return 0.0;
        return t->eval(k, x);
    }
    return std::get<Derivatives>(rep_)[k](x);
}

cplx InitialDatum::closed_form_transform(cplx lambda) const {
    const auto* e = exp_sum();
    if (!e) throw Error(ErrorCode::TransformUndefined, "no closed-form transform for " + label_);
    if (domain_ == Domain::HalfLine) return e->half_line_transform(lambda);
    return e->interval_transform(lambda).value();
}

Scaled InitialDatum::closed_form_transform_scaled(cplx lambda) const {
    const auto* e = exp_sum();
    if (!e) throw Error(ErrorCode::TransformUndefined, "no closed-form transform for " + label_);
    if (domain_ == Domain::HalfLine) return Scaled::of(e->half_line_transform(lambda));
    return e->interval_transform(lambda);
}

double InitialDatum::support_end() const {
    if (domain_ == Domain::Interval) return 1.0;
    if (const auto* t = table()) return t->x.back();
    return std::numeric_limits<double>::infinity();
}

CompatibilityReport check_compatibility(const InitialDatum& f, ProblemId p, double tol) {
    if (f.domain() != domain_of(p)) {
        throw Error(ErrorCode::DomainMismatch, "datum '" + f.label() + "' lives on the " +
                                                   std::string(to_string(f.domain())) + ", " +
                                                   std::string(to_string(p)) + " needs the " +
                                                   std::string(to_string(domain_of(p))));
    }
    CompatibilityReport r;
    r.tolerance = tol;
    r.satisfied.emplace_back("f(0)", std::abs(f.value(0.0)));
    if (p == ProblemId::FiniteIntervalKdV) {
        r.satisfied.emplace_back("f(1)", std::abs(f.value(1.0)));
        r.satisfied.emplace_back("f'(1)", std::abs(f.derivative(1, 1.0)));
    }
    r.passed = std::all_of(r.satisfied.begin(), r.satisfied.end(),
                           [tol](const auto& c) { return c.second <= tol; });
    return r;
}

DecayReport check_decay_bound(const InitialDatum& f, int samples, double max_constant) {
    DecayReport r;
    const double eps = f.decay_rate();
    if (f.domain() == Domain::Interval) {
        r.passed = true;
        return r;
    }
    if (!(eps > 0.0)) return r;
    const double xmax = 50.0 / eps;
    for (int i = 0; i < samples; ++i) {
        const double x = xmax * i / (samples - 1);
        const double v = std::abs(f.value(x)) * std::exp(eps * x);
        if (!std::isfinite(v)) return r;
        r.constant = std::max(r.constant, v);
    }
    r.passed = r.constant <= max_constant;
    return r;
}

namespace {

InitialDatum poly_datum(std::vector<cplx> p, std::string label) {
    return InitialDatum::from_exp_sum(Domain::Interval, ExpSum{{ExpTerm{std::move(p), 0.0}}}, 0.0,
                                      std::move(label));
}

InitialDatum exp_datum(std::vector<cplx> p, std::string label) {
    return InitialDatum::from_exp_sum(Domain::HalfLine, ExpSum{{ExpTerm{std::move(p), 1.0}}}, 0.5,
                                      std::move(label));
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"fi_poly1", "fi_poly2", "fi_poly3", "hl_exp1", "hl_exp2", "heat_exp",
            "fi_one",   "fi_zero",  "fi_sin",   "hl_zero", "hl_exp0"};
}

InitialDatum builtin_datum(const std::string& name) {
    if (name == "fi_poly1") return poly_datum({0, 1, -2, 1}, name);           // x(1−x)²
    if (name == "fi_poly2") return poly_datum({0, 0, 1, -3, 3, -1}, name);    // x²(1−x)³
    if (name == "fi_poly3") return poly_datum({0, 0, 0, 1, -2, 1}, name);     // x³(1−x)²
    if (name == "hl_exp1" || name == "heat_exp") return exp_datum({0, 1}, name);
    if (name == "hl_exp2") return exp_datum({0, 0, 1}, name);
    if (name == "hl_exp0") return exp_datum({1}, name);
    if (name == "fi_one") return poly_datum({1}, name);
    if (name == "fi_zero") return poly_datum({}, name);
    if (name == "hl_zero") return exp_datum({}, name);
    if (name == "fi_sin") {
        // sin(πx) = (e^{iπx} − e^{−iπx}) / 2i
        const cplx c = 1.0 / (2.0 * I);
        ExpSum s{{ExpTerm{{c}, -I * pi}, ExpTerm{{-c}, I * pi}}};
        return InitialDatum::from_exp_sum(Domain::Interval, std::move(s), 0.0, name);
    }
    throw Error(ErrorCode::UnknownDatum, "unknown datum '" + name + "'");
}

InitialDatum linear_combination(const std::vector<std::pair<cplx, InitialDatum>>& parts,
                                std::string label) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "empty linear combination");
    const Domain dom = parts.front().second.domain();
    double eps = std::numeric_limits<double>::infinity();
    bool closed = true;
    for (const auto& [c, f] : parts) {
        if (f.domain() != dom) throw Error(ErrorCode::DomainMismatch, "mixed datum domains");
        eps = std::min(eps, f.decay_rate());
        closed = closed && f.has_closed_form();
    }
    if (closed) {
        ExpSum sum;
        for (const auto& [c, f] : parts) {
            for (const auto& t : f.exp_sum()->scaled(c).terms) sum.terms.push_back(t);
        }
        return InitialDatum::from_exp_sum(dom, std::move(sum), eps, std::move(label));
    }
    int order = 64;
    for (const auto& pc : parts) order = std::min(order, pc.second.max_derivative());
    InitialDatum::Derivatives derivs;
    for (int k = 0; k <= order; ++k) {
        derivs.push_back([parts, k](double x) {
            cplx v{0.0};
            for (const auto& [c, f] : parts) v += c * f.derivative(k, x);
            return v;
        });
    }
    return InitialDatum::from_functions(dom, std::move(derivs), eps, std::move(label));
}

}  // namespace utm
