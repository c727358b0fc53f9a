// Multivariate sparse polynomials, interval arithmetic, and state regions.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pacb {

// Closed interval [lo, hi]. All operations produce enclosures.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
    }
    static Interval point(double v) { return Interval(v, v); }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    // max |x| over the interval
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    bool contains(double v) const { return lo <= v && v <= hi; }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    Interval operator*(const Interval& o) const {
        double p1 = lo * o.lo, p2 = lo * o.hi, p3 = hi * o.lo, p4 = hi * o.hi;
        return {std::min(std::min(p1, p2), std::min(p3, p4)),
                std::max(std::max(p1, p2), std::max(p3, p4))};
    }
    Interval operator*(double s) const {
        return s >= 0.0 ? Interval(lo * s, hi * s) : Interval(hi * s, lo * s);
    }
    Interval operator+(double s) const { return {lo + s, hi + s}; }

    // x^n with dedicated even/odd rules; tighter than repeated multiplication.
    Interval pow(int n) const {
        if (n < 0) throw std::invalid_argument("Interval::pow: negative exponent");
        if (n == 0) return point(1.0);
        if (n == 1) return *this;
        double pl = std::pow(lo, n), ph = std::pow(hi, n);
        if (n % 2 == 1) return {pl, ph};
        if (lo >= 0.0) return {pl, ph};
        if (hi <= 0.0) return {ph, pl};
        return {0.0, std::max(pl, ph)};
    }
};

using Exponents = std::vector<int>;

// Sparse multivariate polynomial: map from exponent vector to coefficient.
// Zero-coefficient terms are never stored; term order (lexicographic on the
// exponent vector) fixes the evaluation/summation order.
class Polynomial {
public:
    Polynomial() : arity_(0) {}
    explicit Polynomial(int arity) : arity_(arity) {
        if (arity < 0) throw std::invalid_argument("Polynomial: negative arity");
    }

    static Polynomial constant(int arity, double c) {
        Polynomial p(arity);
        if (c != 0.0) p.terms_[Exponents(arity, 0)] = c;
        return p;
    }
    static Polynomial variable(int arity, int index) {
        if (index < 0 || index >= arity)
            throw std::invalid_argument("Polynomial::variable: index out of range");
        Polynomial p(arity);
        Exponents e(arity, 0);
        e[index] = 1;
        p.terms_[e] = 1.0;
        return p;
    }
    static Polynomial monomial(int arity, Exponents exps, double coef) {
        if (static_cast<int>(exps.size()) != arity)
            throw std::invalid_argument("Polynomial::monomial: arity mismatch");
        Polynomial p(arity);
        if (coef != 0.0) p.terms_[std::move(exps)] = coef;
        return p;
    }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }
    const std::map<Exponents, double>& terms() const { return terms_; }

    void add_term(const Exponents& e, double c) {
        if (static_cast<int>(e.size()) != arity_)
            throw std::invalid_argument("Polynomial::add_term: arity mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0.0) terms_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    int total_degree() const {
        int deg = 0;
        for (const auto& [e, c] : terms_) {
            int d = 0;
            for (int k : e) d += k;
            deg = std::max(deg, d);
        }
        return deg;
    }

    // Max total degree restricted to variables [first, first+count).
    int degree_in(int first, int count) const {
        int deg = 0;
        for (const auto& [e, c] : terms_) {
            int d = 0;
            for (int i = first; i < first + count; ++i) d += e[i];
            deg = std::max(deg, d);
        }
        return deg;
    }

    double eval(std::span<const double> point) const {
        if (static_cast<int>(point.size()) != arity_)
            throw std::invalid_argument("Polynomial::eval: arity mismatch");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = 0; i < arity_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= point[i];
            sum += t;
        }
        return sum;
    }

    Interval eval_interval(std::span<const Interval> box) const {
        if (static_cast<int>(box.size()) != arity_)
            throw std::invalid_argument("Polynomial::eval_interval: arity mismatch");
        Interval sum = Interval::point(0.0);
        for (const auto& [e, c] : terms_) {
            Interval t = Interval::point(c);
            for (int i = 0; i < arity_; ++i)
                if (e[i] > 0) t = t * box[i].pow(e[i]);
            sum = sum + t;
        }
        return sum;
    }

    // Partial derivative with respect to variable `var`.
    Polynomial derivative(int var) const {
        if (var < 0 || var >= arity_)
            throw std::invalid_argument("Polynomial::derivative: index out of range");
        Polynomial r(arity_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d = e;
            d[var] -= 1;
            r.add_term(d, c * e[var]);
        }
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        require_same_arity(o);
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        require_same_arity(o);
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        require_same_arity(o);
        Polynomial r(arity_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                Exponents e(arity_);
                for (int i = 0; i < arity_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    Polynomial operator*(double s) const {
        Polynomial r(arity_);
        if (s == 0.0) return r;
        for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }

    Polynomial pow(int n) const {
        if (n < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
        Polynomial r = constant(arity_, 1.0);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    // Substitute variable i by subs[i]; all subs share a common arity.
    Polynomial compose(const std::vector<Polynomial>& subs) const {
        if (static_cast<int>(subs.size()) != arity_)
            throw std::invalid_argument("Polynomial::compose: wrong substitution count");
        int out_arity = arity_ == 0 ? 0 : subs[0].arity();
        for (const auto& s : subs)
            if (s.arity() != out_arity)
                throw std::invalid_argument("Polynomial::compose: mixed arities");
        // Cache powers of each substitution up to the needed degree.
        std::vector<std::vector<Polynomial>> powers(arity_);
        for (int i = 0; i < arity_; ++i) {
            int need = 0;
            for (const auto& [e, c] : terms_) need = std::max(need, e[i]);
            powers[i].reserve(need + 1);
            powers[i].push_back(constant(out_arity, 1.0));
            for (int k = 1; k <= need; ++k)
                powers[i].push_back(powers[i].back() * subs[i]);
        }
        Polynomial r(out_arity);
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(out_arity, c);
            for (int i = 0; i < arity_; ++i)
                if (e[i] > 0) t = t * powers[i][e[i]];
            r = r + t;
        }
        return r;
    }

    // Fix the first `values.size()` variables to numeric values, producing a
    // polynomial in the remaining trailing variables.
    Polynomial substitute_head(std::span<const double> values) const {
        int drop = static_cast<int>(values.size());
        if (drop > arity_) throw std::invalid_argument("substitute_head: too many values");
        Polynomial r(arity_ - drop);
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = 0; i < drop; ++i)
                for (int k = 0; k < e[i]; ++k) t *= values[i];
            Exponents tail(e.begin() + drop, e.end());
            r.add_term(tail, t);
        }
        return r;
    }

    // Fix the last `values.size()` variables to numeric values, producing a
    // polynomial in the remaining leading variables.
    Polynomial substitute_tail(std::span<const double> values) const {
        int keep = arity_ - static_cast<int>(values.size());
        if (keep < 0) throw std::invalid_argument("substitute_tail: too many values");
        Polynomial r(keep);
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = keep; i < arity_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= values[i - keep];
            Exponents head(e.begin(), e.begin() + keep);
            r.add_term(head, t);
        }
        return r;
    }

    bool operator==(const Polynomial& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }

private:
    void require_same_arity(const Polynomial& o) const {
        if (arity_ != o.arity_)
            throw std::invalid_argument("Polynomial: arity mismatch");
    }

    int arity_;
    std::map<Exponents, double> terms_;
};

struct Box {
    std::vector<Interval> axes;

    int dim() const { return static_cast<int>(axes.size()); }
    bool contains(std::span<const double> p) const {
        if (static_cast<int>(p.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (!axes[i].contains(p[i])) return false;
        return true;
    }
    int widest_axis() const {
        int best = 0;
        for (int i = 1; i < dim(); ++i)
            if (axes[i].width() > axes[best].width()) best = i;
        return best;
    }
    double volume() const {
        double v = 1.0;
        for (const auto& a : axes) v *= a.width();
        return v;
    }
};

// Safe sets and supports: axis-aligned boxes or Euclidean balls.
class Region {
public:
    enum class Kind { Box, Ball };

    static Region box(Box b) {
        Region r;
        r.kind_ = Kind::Box;
        r.box_ = std::move(b);
        return r;
    }
    static Region ball(std::vector<double> center, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("Region::ball: radius <= 0");
        Region r;
        r.kind_ = Kind::Ball;
        r.center_ = std::move(center);
        r.radius_ = radius;
        return r;
    }

    Kind kind() const { return kind_; }
    int dim() const {
        return kind_ == Kind::Box ? box_.dim() : static_cast<int>(center_.size());
    }
    const Box& as_box() const { return box_; }
    const std::vector<double>& center() const { return center_; }
    double radius() const { return radius_; }

    Box bounding_box() const {
        if (kind_ == Kind::Box) return box_;
        Box b;
        b.axes.reserve(center_.size());
        for (double c : center_) b.axes.push_back(Interval(c - radius_, c + radius_));
        return b;
    }

    bool contains(std::span<const double> p) const {
        if (kind_ == Kind::Box) return box_.contains(p);
        if (static_cast<int>(p.size()) != dim()) return false;
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            double d = p[i] - center_[i];
            s += d * d;
        }
        return s <= radius_ * radius_;
    }

    bool strictly_inside(std::span<const double> p) const {
        if (kind_ == Kind::Box) {
            if (static_cast<int>(p.size()) != dim()) return false;
            for (int i = 0; i < dim(); ++i)
                if (!(box_.axes[i].lo < p[i] && p[i] < box_.axes[i].hi)) return false;
            return true;
        }
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            double d = p[i] - center_[i];
            s += d * d;
        }
        return s < radius_ * radius_;
    }

    // Membership polynomial q with region = {q(x) <= 0}.
    Polynomial membership_poly() const {
        int n = dim();
        if (kind_ == Kind::Ball) {
            Polynomial q = Polynomial::constant(n, -radius_ * radius_);
            for (int i = 0; i < n; ++i) {
                Polynomial xi = Polynomial::variable(n, i) -
                                Polynomial::constant(n, center_[i]);
                q = q + xi * xi;
            }
            return q;
        }
        // For boxes use max over per-axis constraints folded into a single
        // even-power surrogate is not exact; callers handling Box regions use
        // interval tests against the box directly.
        throw std::logic_error("membership_poly: only defined for Ball regions");
    }

    // Interval test of a box against the region: returns -1 if the box is
    // entirely inside the (closed) region, +1 if entirely outside, 0 if mixed.
    int classify(const Box& b) const {
        if (kind_ == Kind::Box) {
            bool inside = true, outside = false;
            for (int i = 0; i < dim(); ++i) {
                if (b.axes[i].lo > box_.axes[i].hi || b.axes[i].hi < box_.axes[i].lo)
                    outside = true;
                if (b.axes[i].lo < box_.axes[i].lo || b.axes[i].hi > box_.axes[i].hi)
                    inside = false;
            }
            if (outside) return +1;
            return inside ? -1 : 0;
        }
        Interval s = Interval::point(-radius_ * radius_);
        for (int i = 0; i < dim(); ++i) {
            Interval d = b.axes[i] + (-center_[i]);
            s = s + d.pow(2);
        }
        if (s.hi <= 0.0) return -1;
        if (s.lo > 0.0) return +1;
        return 0;
    }

    // Region inclusion via interval tests (sound, not complete for balls).
    bool contains_region(const Region& inner) const {
        if (kind_ == Kind::Ball && inner.kind_ == Kind::Ball) {
            double s = 0.0;
            for (int i = 0; i < dim(); ++i) {
                double d = inner.center_[i] - center_[i];
                s += d * d;
            }
            return std::sqrt(s) + inner.radius_ <= radius_ + 1e-12;
        }
        if (kind_ == Kind::Box) {
            Box ib = inner.bounding_box();
            for (int i = 0; i < dim(); ++i)
                if (ib.axes[i].lo < box_.axes[i].lo - 1e-12 ||
                    ib.axes[i].hi > box_.axes[i].hi + 1e-12)
                    return false;
            return true;
        }
        // Ball outer, box inner: check the box corners.
        const Box& ib = inner.as_box();
        int n = dim();
        std::vector<double> corner(n);
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            for (int i = 0; i < n; ++i)
                corner[i] = (mask >> i) & 1 ? ib.axes[i].hi : ib.axes[i].lo;
            if (!contains(corner)) return false;
        }
        return true;
    }

private:
    Kind kind_ = Kind::Box;
    Box box_;
    std::vector<double> center_;
    double radius_ = 0.0;
};

}  // namespace pacb
