#include "aglab/sequence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "aglab/errors.hpp"

namespace aglab {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;
// ln(DBL_MAX): a level-l top at or below this fits at level l - 1.
const double kCap = std::log(std::numeric_limits<double>::max());
// Counts above 2^62 are carried as magnitudes only.
constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 62;
const double kLogExactLimit = 62.0 * kLn2;
// Integers below 2^52 are exact doubles with room for +-1.
constexpr double kExactDouble = 4503599627370496.0;

double log_sum_exp(const std::vector<double>& xs) {
    double hi = -kInf;
    for (double x : xs) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_integer(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Magnitude

Magnitude Magnitude::make(std::uint32_t level, double top) {
    if (std::isnan(top) || std::isinf(top)) throw ConsistencyError("magnitude top is not finite");
    if (level == 0 && top < 0.0) throw ConsistencyError("magnitude is negative");
    while (level > 0 && top <= kCap) {
        top = std::exp(top);
        --level;
    }
    return Magnitude(level, top);
}

Magnitude Magnitude::of(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("magnitude needs a finite x >= 0");
    return Magnitude(0, x);
}

Magnitude Magnitude::exp_of(double x) {
    if (std::isnan(x) || std::isinf(x)) throw InvalidArgument("exp_of needs a finite argument");
    if (x <= kCap) return Magnitude(0, std::exp(x));
    return Magnitude(1, x);
}

Magnitude Magnitude::exp_of(const Magnitude& x) {
    if (x.level_ == 0) return exp_of(x.top_);
    return Magnitude(x.level_ + 1, x.top_);
}

Magnitude Magnitude::ln() const {
    if (level_ == 0) {
        if (top_ < 1.0) {
            if (top_ >= 1.0 - 1e-15) return Magnitude();
            throw ConsistencyError("ln of a magnitude below 1");
        }
        return Magnitude(0, std::log(top_));
    }
    return make(level_ - 1, top_);
}

Magnitude Magnitude::plus(double c) const {
    if (level_ == 0) {
        double r = top_ + c;
        if (r < 0.0) {
            if (r >= -1e-12 * std::max(1.0, top_)) r = 0.0;
            else throw ConsistencyError("magnitude would become negative");
        }
        if (std::isfinite(r)) return Magnitude(0, r);
        return make(1, std::log(top_) + std::log1p(c / top_));
    }
    if (level_ == 1) return make(1, top_ + std::log1p(c * std::exp(-top_)));
    return *this;
}

Magnitude Magnitude::times(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("magnitude scale must be positive");
    if (level_ == 0) {
        const double r = top_ * c;
        if (std::isfinite(r)) return Magnitude(0, r);
        return make(1, std::log(top_) + std::log(c));
    }
    if (level_ == 1) return make(1, top_ + std::log(c));
    return *this;
}

double Magnitude::to_double() const { return level_ == 0 ? top_ : kInf; }

double Magnitude::ln_double() const {
    if (level_ == 0) return std::log(top_);
    if (level_ == 1) return top_;
    return kInf;
}

std::string Magnitude::to_string() const {
    std::string out;
    for (std::uint32_t i = 0; i < level_; ++i) out += "exp(";
    out += format_double(top_);
    out.append(level_, ')');
    return out;
}

bool operator<(const Magnitude& a, const Magnitude& b) {
    if (a.level_ != b.level_) return a.level_ < b.level_;
    return a.top_ < b.top_;
}

Magnitude max(const Magnitude& a, const Magnitude& b) { return a < b ? b : a; }

Magnitude add(const Magnitude& a, const Magnitude& b) {
    const Magnitude& big = a < b ? b : a;
    const Magnitude& small = a < b ? a : b;
    if (small.is_zero()) return big;
    if (big.level() == 0) {
        const double r = big.top() + small.top();
        if (std::isfinite(r)) return Magnitude::of(r);
        return Magnitude::exp_of(std::log(big.top()) + std::log1p(small.top() / big.top()));
    }
    if (big.level() == 1) {
        const double ratio = std::exp(small.ln_double() - big.top());
        return Magnitude::exp_of(big.top() + std::log1p(ratio));
    }
    return big;
}

double SignedMagnitude::to_double() const { return sign == 0 ? 0.0 : sign * abs.to_double(); }

std::optional<SignedMagnitude> difference(const Magnitude& a, const Magnitude& b) {
    if (a.level() == 0 && b.level() == 0) {
        const double d = a.top() - b.top();
        return SignedMagnitude{d > 0.0 ? 1 : (d < 0.0 ? -1 : 0), Magnitude::of(std::abs(d))};
    }
    if (a == b) return std::nullopt;
    const int sign = b < a ? 1 : -1;
    const Magnitude& big = sign > 0 ? a : b;
    const Magnitude& small = sign > 0 ? b : a;
    // small / big < e^{-709}: the difference is big itself.
    if (small.level() == 0 && small.top() < 1.0) return SignedMagnitude{sign, big};
    const auto gap = difference(big.ln(), small.ln());
    if (!gap) return std::nullopt;
    const double g = gap->to_double();
    if (g > 745.0) return SignedMagnitude{sign, big};
    const double scale = big.ln_double();
    if (!std::isfinite(scale) || g <= 1e-12 * std::max(1.0, scale)) return std::nullopt;
    return SignedMagnitude{sign, big.times(-std::expm1(-g))};
}

// ---------------------------------------------------------------------------
// BigCount

BigCount BigCount::of(std::uint64_t v) {
    if (v == 0) throw InvalidArgument("counts are positive");
    BigCount c;
    c.value = Magnitude::of(static_cast<double>(v));
    if (v <= kExactLimit) c.exact = v;
    return c;
}

BigCount BigCount::from_magnitude(const Magnitude& m) {
    if (m.level() == 0 && m.top() <= static_cast<double>(kExactLimit)) {
        return of(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(m.top()))));
    }
    BigCount c;
    c.value = m;
    return c;
}

BigCount BigCount::pow2_minus_one(const Magnitude& K) {
    BigCount c;
    if (K.level() == 0 && K.top() <= 61.0) {
        const auto e = static_cast<unsigned>(K.top());
        if (e == 0) throw InvalidArgument("2^K - 1 needs K >= 1");
        c = of((std::uint64_t{1} << e) - 1);
    } else {
        c.value = Magnitude::exp_of(K.times(kLn2));
    }
    c.pow2_exponent = K;
    return c;
}

BigCount BigCount::doubled() const {
    if (exact && *exact <= kExactLimit / 2) return of(*exact * 2);
    BigCount c;
    c.value = value.times(2.0);
    return c;
}

BigCount BigCount::plus_one() const {
    if (exact && *exact < kExactLimit) return of(*exact + 1);
    BigCount c;
    c.value = value.plus(1.0);
    return c;
}

double BigCount::ln() const { return value.ln_double(); }

Magnitude BigCount::log() const { return value.ln(); }

std::string BigCount::to_string() const {
    if (exact) return std::to_string(*exact);
    if (pow2_exponent) {
        const Magnitude& K = *pow2_exponent;
        const std::string ks =
            K.level() == 0 && K.top() < kExactDouble ? format_integer(K.top()) : K.to_string();
        return "2^" + ks + "-1";
    }
    return value.to_string();
}

bool operator<(const BigCount& a, const BigCount& b) {
    if (a.exact && b.exact) return *a.exact < *b.exact;
    return a.value < b.value;
}

bool same_count(const BigCount& a, const BigCount& b) {
    if (a.exact && b.exact) return *a.exact == *b.exact;
    return a.value == b.value;
}

BigCount max(const BigCount& a, const BigCount& b) { return a < b ? b : a; }

BigCount add(const BigCount& a, const BigCount& b) {
    if (a.exact && b.exact && *a.exact <= kExactLimit - *b.exact) return BigCount::of(*a.exact + *b.exact);
    BigCount c;
    c.value = add(a.value, b.value);
    return c;
}

// ---------------------------------------------------------------------------
// RateFunction

RateFunction RateFunction::inverse_log() {
    RateFunction r;
    r.kind_ = Kind::InverseLog;
    r.name_ = "inverse-log";
    return r;
}

RateFunction RateFunction::power(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("power rate needs alpha > 0");
    RateFunction r;
    r.kind_ = Kind::Power;
    r.param_ = alpha;
    std::ostringstream os;
    os << "power:" << alpha;
    r.name_ = os.str();
    return r;
}

RateFunction RateFunction::constant(double c) {
    RateFunction r;
    r.kind_ = Kind::Constant;
    r.param_ = c;
    std::ostringstream os;
    os << "constant:" << c;
    r.name_ = os.str();
    return r;
}

RateFunction RateFunction::custom(std::string name, std::function<double(std::uint64_t)> fn) {
    if (!fn) throw InvalidArgument("custom rate needs a callable");
    RateFunction r;
    r.kind_ = Kind::Custom;
    r.name_ = std::move(name);
    r.fn_ = std::move(fn);
    return r;
}

RateFunction RateFunction::parse(const std::string& text) {
    if (text == "inverse-log") return inverse_log();
    if (text == "inverse-sqrt") return power(0.5);
    if (text == "inverse-fourth-root") return power(0.25);
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InvalidArgument("bad rate parameter in '" + text + "'");
        }
        if (head == "power") return power(value);
        if (head == "constant") return constant(value);
    }
    throw InvalidArgument("unknown rate '" + text + "'");
}

double RateFunction::operator()(std::uint64_t n) const {
    switch (kind_) {
        case Kind::InverseLog:
            // ceil(log2(n + 2)) == bit_width(n + 1)
            return 1.0 / static_cast<double>(std::bit_width(n + 1));
        case Kind::Power:
            return std::pow(static_cast<double>(n), -param_);
        case Kind::Constant:
            return param_;
        case Kind::Custom:
            return fn_(n);
    }
    return 0.0;
}

Magnitude RateFunction::neg_log_at(const BigCount& n) const {
    if (n.exact) {
        const double v = (*this)(*n.exact);
        if (!(v > 0.0) || !std::isfinite(v) || v > 1.0) {
            throw InvalidArgument("rate '" + name_ + "' must map into (0, 1] at n = " + n.to_string());
        }
        return Magnitude::of(std::max(0.0, -std::log(v)));
    }
    switch (kind_) {
        case Kind::InverseLog: {
            // bit_width(2^K) = K + 1
            if (n.pow2_exponent) return n.pow2_exponent->plus(1.0).ln();
            const Magnitude log2_n = n.log().times(1.0 / kLn2);
            if (log2_n.level() == 0 && log2_n.top() < kExactDouble) {
                return Magnitude::of(std::log(std::floor(log2_n.top()) + 1.0));
            }
            return log2_n.plus(1.0).ln();
        }
        case Kind::Power:
            return n.log().times(param_);
        case Kind::Constant:
            if (!(param_ > 0.0) || param_ > 1.0) throw InvalidArgument("constant rate must lie in (0, 1]");
            return Magnitude::of(-std::log(param_));
        case Kind::Custom:
            break;
    }
    throw Unsupported("custom rate '" + name_ + "' cannot be evaluated beyond 64-bit range");
}

std::optional<RateFunction::Step> RateFunction::smallest_with_neg_log_at_least(const Magnitude& theta,
                                                                                const BigCount& lower_exclusive,
                                                                                std::uint64_t budget,
                                                                                std::string* why) const {
    auto fail = [why](std::string msg) -> std::optional<Step> {
        if (why != nullptr) *why = std::move(msg);
        return std::nullopt;
    };
    const double theta_d = theta.to_double();
    auto neg_log = [&](std::uint64_t n) {
        const double v = (*this)(n);
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("rate must be positive and finite");
        return -std::log(v);
    };
    auto satisfied = [&](std::uint64_t n) { return neg_log(n) >= theta_d - kSlack; };
    // The rates here are nonincreasing, so raising n to the floor keeps the slack.
    auto finish = [&](BigCount n, double slack) -> std::optional<Step> {
        const BigCount floor = lower_exclusive.plus_one();
        return Step{max(n, floor), slack};
    };

    switch (kind_) {
        case Kind::Constant: {
            if (!(param_ > 0.0) || param_ > 1.0) throw InvalidArgument("constant rate must lie in (0, 1]");
            const double a = -std::log(param_);
            if (a >= theta_d - kSlack) return finish(lower_exclusive.plus_one(), a - theta_d);
            return fail("constant rate never drops to the required threshold");
        }

        case Kind::Custom: {
            const BigCount floor = lower_exclusive.plus_one();
            if (!floor.exact) return fail("custom rate search started beyond 64-bit range");
            if (!std::isfinite(theta_d)) return fail("custom rate threshold beyond double range");
            const std::uint64_t start = *floor.exact;
            for (std::uint64_t n = start; n - start < budget && n <= kExactLimit; ++n) {
                if (satisfied(n)) return Step{BigCount::of(n), neg_log(n) - theta_d};
            }
            return fail("search budget exhausted");
        }

        case Kind::Power: {
            // n^{-alpha} <= t  <=>  ln n >= -ln t / alpha
            if (std::isfinite(theta_d)) {
                const double log_n = std::max(0.0, theta_d - kSlack) / param_;
                if (log_n < kLogExactLimit - 1.0) {
                    auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::exp(log_n))));
                    while (n > 1 && satisfied(n - 1)) --n;
                    while (!satisfied(n)) ++n;
                    return finish(BigCount::of(n), neg_log(n) - theta_d);
                }
            }
            return finish(BigCount::from_magnitude(Magnitude::exp_of(theta.times(1.0 / param_))), 0.0);
        }

        case Kind::InverseLog: {
            // 1/B <= t with B = bit_width(n + 1) integer  <=>  B >= ceil(1/t)
            //                                             <=>  n >= 2^{ceil(1/t) - 1} - 1
            const Magnitude inv = Magnitude::exp_of(theta);
            if (inv.level() == 0 && inv.top() < kExactDouble) {
                const double x = inv.top();
                double needed = std::ceil(x);
                if (std::abs(x - std::round(x)) <= 1e-9 * x) needed = std::round(x);
                needed = std::max(needed, 2.0);
                return finish(BigCount::pow2_minus_one(Magnitude::of(needed - 1.0)),
                              std::log(needed) - theta_d);
            }
            // ceil and -1 are invisible here; ceil(x) >= x keeps the slack nonnegative.
            return finish(BigCount::pow2_minus_one(inv.plus(-1.0)), 0.0);
        }
    }
    return fail("unknown rate kind");
}

// ---------------------------------------------------------------------------
// Construction and verification

bool LemmaChecks::all_tail_bound() const {
    return std::all_of(tail_bound.begin(), tail_bound.end(), [](bool b) { return b; });
}
bool LemmaChecks::all_mass_ratio() const {
    return std::all_of(mass_ratio.begin(), mass_ratio.end(), [](bool b) { return b; });
}
bool LemmaChecks::all_rate_match() const {
    return std::all_of(rate_match.begin(), rate_match.end(), [](bool b) { return b; });
}
bool LemmaChecks::all() const {
    return all_tail_bound() && all_mass_ratio() && all_rate_match() && c_at_least_half && normalized &&
           rate_decreased;
}

namespace {

// theta_i = -ln min(R(n_i)/2, R(n_1)/(2 n_i)) = max(a_i + ln 2, a_1 + ln 2 + ln n_i).
Magnitude step_target(const Magnitude& a_i, const Magnitude& a_1, const BigCount& n_i) {
    return max(a_i.plus(kLn2), add(n_i.log(), a_1.plus(kLn2)));
}

}  // namespace

LemmaChecks verify_lemma512(const LemmaArtifacts& art) {
    const std::size_t d = art.n.size();
    const auto& a = art.neg_log_rate;
    LemmaChecks out;
    out.tail_bound.assign(d, false);
    out.mass_ratio.assign(d, false);
    out.rate_match.assign(d, false);
    out.tail_margin.assign(d, kInf);
    if (d == 0 || a.size() != d || art.neg_log_p.size() != d || art.step_slack.size() + 1 != d) return out;
    const double a1 = a[0].to_double();

    // Per step: slack s_l = a_{l+1} - theta_l, e_l = ln(n_l R(n_l)) and the
    // increment a_{l+1} - a_l = max(ln 2, a_1 + ln 2 + e_l) + s_l.
    std::vector<double> slack(d, 0.0);
    std::vector<double> e(d, 0.0);
    std::vector<double> inc(d, 0.0);
    std::vector<bool> resolved(d, true);
    for (std::size_t l = 0; l < d; ++l) {
        const auto el = difference(art.n[l].log(), a[l]);
        if (!el) {
            resolved[l] = false;
            continue;
        }
        e[l] = el->to_double();
        if (l + 1 == d) break;
        const auto sl = difference(a[l + 1], step_target(a[l], a[0], art.n[l]));
        slack[l] = sl ? sl->to_double() : art.step_slack[l];
        inc[l] = std::max(kLn2, a1 + kLn2 + e[l]) + slack[l];
    }

    for (std::size_t i = 0; i < d; ++i) {
        // (1) ln(n_i * tail) = ln C + min(e_i - ln 2, -a_1 - ln 2) - s_i + ln(1 + sum of ratios).
        if (i + 1 == d) {
            out.tail_margin[i] = -kInf;
            out.tail_bound[i] = true;
        } else {
            bool ok = resolved[i];
            double rho = 1.0;
            double cum = 0.0;
            for (std::size_t j = i + 1; j + 1 < d; ++j) {
                ok = ok && resolved[j];
                cum += inc[j];
                rho += std::exp(-cum);
            }
            const double m = std::min(e[i] - kLn2, -a1 - kLn2);
            const double margin = art.log_C + m - slack[i] + std::log(rho);
            out.tail_margin[i] = margin;
            out.tail_bound[i] = ok && !(margin > 1e-12);
        }

        // (2) exact product when both counts are exact.
        if (art.n[i].exact && art.k[i].exact) {
            const long double lhs = static_cast<long double>(*art.n[i].exact) * art.p[i];
            out.mass_ratio[i] = lhs <= static_cast<long double>(*art.k[i].exact);
        } else if (same_count(art.n[i], art.k[i])) {
            out.mass_ratio[i] = art.log_C <= a[i].to_double();
        } else {
            const auto gap = difference(art.k[i].log(), art.n[i].log());
            out.mass_ratio[i] = gap && art.log_C - a[i].to_double() <= gap->to_double();
        }

        // (3) p_{k_i} = C R(n_i) and positive.
        const Magnitude expected = a[i].plus(-art.log_C);
        const Magnitude& got = art.neg_log_p[i];
        out.rate_match[i] = expected.level() == got.level() &&
                            std::abs(expected.top() - got.top()) <= 1e-12 * std::max(1.0, expected.top());
    }
    out.c_at_least_half = art.log_C >= -kLn2;
    out.normalized = std::abs(art.sum_p - 1.0) <= 1e-12;
    out.rate_decreased = d >= 2 && a.front() < a.back();
    return out;
}

LemmaArtifacts lemma512_construct(const RateFunction& rate, std::uint64_t depth, std::uint64_t search_budget) {
    if (depth == 0) throw InvalidArgument("depth must be >= 1");

    LemmaArtifacts art;
    art.rate_name = rate.name();
    art.depth = depth;

    // n_1: first n with R(n) < 1.
    std::optional<BigCount> first;
    for (std::uint64_t n = 1; n <= search_budget; ++n) {
        const double v = rate(n);
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("rate must map into (0, 1)");
        if (v < 1.0) {
            first = BigCount::of(n);
            break;
        }
    }
    if (!first) throw ConstructionFailure("no n with R(n) < 1 within the search budget");
    art.n.push_back(*first);
    art.neg_log_rate.push_back(rate.neg_log_at(*first));

    for (std::uint64_t i = 1; i < depth; ++i) {
        const BigCount prev = art.n.back();
        const Magnitude theta = step_target(art.neg_log_rate.back(), art.neg_log_rate.front(), prev);
        std::string why;
        auto step = rate.smallest_with_neg_log_at_least(theta, prev.doubled(), search_budget, &why);
        if (!step) {
            throw ConstructionFailure("cannot find n_" + std::to_string(i + 1) + " for rate '" + rate.name() +
                                      "': " + why);
        }
        const Magnitude a_next = rate.neg_log_at(step->n);
        const auto s = difference(a_next, theta);
        art.step_slack.push_back(s ? s->to_double() : step->certified_slack);
        art.n.push_back(step->n);
        art.neg_log_rate.push_back(a_next);
    }

    for (std::size_t i = 0; i < art.n.size(); ++i) {
        art.k.push_back(i == 0 ? art.n[0] : max(art.n[i], art.k[i - 1].plus_one()));
        art.sigma.push_back(i == 0 ? art.k[0] : add(art.sigma[i - 1], art.k[i]));
    }

    // C = 1 / sum R(n_i); p_i = R(n_i) / sum R(n_j). Rates beyond double
    // range contribute nothing visible to the sum.
    for (const Magnitude& a : art.neg_log_rate) art.log_rate.push_back(-a.to_double());
    const double log_total = log_sum_exp(art.log_rate);
    art.log_C = -log_total;
    art.C = std::exp(art.log_C);
    art.c_exceeds_one = art.C > 1.0;
    double sum = 0.0;
    double comp = 0.0;
    for (const Magnitude& a : art.neg_log_rate) {
        const Magnitude nlp = a.plus(log_total);
        art.neg_log_p.push_back(nlp);
        art.log_p.push_back(-nlp.to_double());
        const double p = std::exp(art.log_p.back());
        art.p.push_back(p);
        // Neumaier summation
        const double t = sum + p;
        comp += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
        sum = t;
    }
    art.sum_p = sum + comp;
    art.checks = verify_lemma512(art);
    return art;
}

}  // namespace aglab
