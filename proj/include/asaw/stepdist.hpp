#pragma once

#include "lattice.hpp"
#include "rational.hpp"
#include "walk.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace asaw {

// Finite symmetric step distribution with exact probabilities.  Every
// probability is stored as weight/denominator with integer weight, which the
// enumerators use to accumulate walk masses in machine integers.
class StepDistribution {
public:
    struct Step {
        Point x;
        Rational prob;
        std::uint64_t weight = 0;  // prob * denominator()
        int axis = -1;             // unit axis, or -1 for non-unit steps
    };

    StepDistribution(int d, std::map<Point, Rational> support, std::string name)
        : d_(d), name_(std::move(name)) {
        if (d < 2 || d > kMaxDim) throw std::invalid_argument("dimension must be in [2, 8]");
        Rational total = 0;
        BigInt lcm = 1;
        for (const auto& [x, p] : support) {
            if (x.dim != d) throw std::invalid_argument("support point has wrong dimension");
            if (x.is_origin()) throw std::invalid_argument("D(o) must vanish");
            if (p <= 0) throw std::invalid_argument("probabilities must be positive");
            total += p;
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
        }
        if (total != 1) throw std::invalid_argument("probabilities must sum to 1");
        if (!lcm.fits_ulong_p()) throw std::invalid_argument("denominator too large");
        den_ = lcm.get_ui();
        for (const auto& [x, p] : support) {
            Rational w = p * Rational(lcm);
            steps_.push_back(Step{x, p, w.get_num().get_ui(), unit_axis(x)});
            range_ = std::max<int>(range_, static_cast<int>(x.norm_inf()));
            sigma2_ += p * Rational(x.norm2sq());
        }
        uniform_ = true;
        for (const auto& s : steps_) uniform_ = uniform_ && s.weight == steps_.front().weight;
        p1_ = prob(unit_vector(d, 0));
        if (p1_ <= 0) throw std::invalid_argument("p1 = D(e1) must be positive");
        check_symmetric();
    }

    int dim() const { return d_; }
    const std::string& name() const { return name_; }
    const std::vector<Step>& steps() const { return steps_; }
    const Rational& p1() const { return p1_; }
    const Rational& sigma2() const { return sigma2_; }
    int range_bound() const { return range_; }
    std::uint64_t denominator() const { return den_; }
    bool uniform() const { return uniform_; }
    bool nearest_neighbour() const { return name_ == "nn"; }

    Rational prob(const Point& x) const {
        for (const auto& s : steps_)
            if (s.x == x) return s.prob;
        return 0;
    }

private:
    void check_symmetric() const {
        for (const auto& s : steps_) {
            for (int a = 0; a < d_; ++a) {
                if (prob(reflect(s.x, a)) != s.prob) throw std::invalid_argument("D is not reflection symmetric");
                for (int b = a + 1; b < d_; ++b) {
                    Point y = s.x;
                    std::swap(y[a], y[b]);
                    if (prob(y) != s.prob) throw std::invalid_argument("D is not permutation symmetric");
                }
            }
        }
    }

    int d_;
    std::string name_;
    std::vector<Step> steps_;
    Rational p1_;
    Rational sigma2_ = 0;
    int range_ = 0;
    std::uint64_t den_ = 1;
    bool uniform_ = true;
};

inline StepDistribution make_nearest_neighbour(int d) {
    std::map<Point, Rational> s;
    for (int a = 0; a < d; ++a)
        for (int sg = -1; sg <= 1; sg += 2) s[unit_vector(d, a, sg)] = Rational(1, 2 * d);
    return StepDistribution(d, std::move(s), "nn");
}

// Uniform shape only: D uniform on {x != o : |x|_inf <= L}.
inline StepDistribution make_spread_out(int d, int L, const std::string& shape = "uniform") {
    if (shape != "uniform") throw std::invalid_argument("unsupported shape: " + shape);
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    std::int64_t side = 2 * L + 1;
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= side;
    std::map<Point, Rational> s;
    Rational p(1, static_cast<unsigned long>(count - 1));
    for (std::int64_t k = 0; k < count; ++k) {
        Point x(d);
        std::int64_t r = k;
        for (int i = 0; i < d; ++i) {
            x[i] = r % side - L;
            r /= side;
        }
        if (!x.is_origin()) s[x] = p;
    }
    return StepDistribution(d, std::move(s), "spread:L=" + std::to_string(L) + ",shape=uniform");
}

// "nn" or "spread:L=<int>,shape=uniform".
inline StepDistribution parse_distribution(const std::string& spec, int d) {
    if (spec == "nn") return make_nearest_neighbour(d);
    const std::string prefix = "spread:";
    if (spec.rfind(prefix, 0) != 0) throw std::invalid_argument("unknown distribution: " + spec);
    int L = -1;
    std::string shape = "uniform";
    std::stringstream ss(spec.substr(prefix.size()));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed distribution option: " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "L") {
            try {
                L = std::stoi(val);
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed L: " + val);
            }
        } else if (key == "shape") {
            shape = val;
        } else {
            throw std::invalid_argument("unknown distribution option: " + key);
        }
    }
    if (L < 1) throw std::invalid_argument("spread-out distribution needs L >= 1");
    return make_spread_out(d, L, shape);
}

inline Rational apriori_weight(const StepDistribution& D, const Walk& w) {
    Rational out = 1;
    for (int i = 0; i < w.steps(); ++i) {
        Rational p = D.prob(w[i + 1] - w[i]);
        if (p == 0) return 0;
        out *= p;
    }
    return out;
}

}  // namespace asaw
