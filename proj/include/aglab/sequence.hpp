#pragma once

// Rate functions and the two-sequence construction behind the slow-rate
// lower bound: increasing (n_i), (k_i), a distribution p on the k_i and a
// constant C with
//   (1) sum_{j > i} p_{k_j} <= 1 / n_i
//   (2) n_i p_{k_i} <= k_i
//   (3) p_{k_i} = C R(n_i) > 0.
//
// (1) and (3) together force n_{i+1} >= R^{-1}(2 / n_i), so for slowly
// decaying rates such as 1 / log n the n_i form a power tower. Counts and
// their logarithms are therefore carried in level-index form (a double
// under a stack of exponentials) with an exact value attached while one
// exists.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aglab {

// Nonnegative real exp(exp(...exp(top))) with `level` exponentials. Level 0
// holds any finite double; a higher level is used only when the value at the
// level below would overflow, so the representation is canonical and ordered
// lexicographically by (level, top).
class Magnitude {
public:
    Magnitude() = default;
    static Magnitude of(double x);
    static Magnitude exp_of(double x);
    static Magnitude exp_of(const Magnitude& x);

    // ln of the value; requires value >= 1.
    Magnitude ln() const;
    // value + c; the result must stay nonnegative.
    Magnitude plus(double c) const;
    // value * c for c > 0.
    Magnitude times(double c) const;

    std::uint32_t level() const { return level_; }
    double top() const { return top_; }
    bool is_zero() const { return level_ == 0 && top_ == 0.0; }
    // The value as a double, +inf beyond double range.
    double to_double() const;
    // ln of the value as a double, +inf when that overflows too.
    double ln_double() const;
    std::string to_string() const;

    friend bool operator==(const Magnitude&, const Magnitude&) = default;
    friend bool operator<(const Magnitude& a, const Magnitude& b);

private:
    Magnitude(std::uint32_t level, double top) : level_(level), top_(top) {}
    static Magnitude make(std::uint32_t level, double top);
    std::uint32_t level_ = 0;
    double top_ = 0.0;
};

Magnitude max(const Magnitude& a, const Magnitude& b);
Magnitude add(const Magnitude& a, const Magnitude& b);

// a - b as a sign and an absolute value.
struct SignedMagnitude {
    int sign = 0;
    Magnitude abs;
    // Signed value as a double, +-inf beyond double range.
    double to_double() const;
};
// Empty when the operands agree to within working precision at a scale
// where their difference cannot be resolved.
std::optional<SignedMagnitude> difference(const Magnitude& a, const Magnitude& b);

struct BigCount {
    Magnitude value;
    std::optional<std::uint64_t> exact;          // set while the count fits in 62 bits
    std::optional<Magnitude> pow2_exponent;      // K when the count is exactly 2^K - 1

    static BigCount of(std::uint64_t v);
    static BigCount from_magnitude(const Magnitude& m);
    // 2^K - 1 for an integer K >= 1.
    static BigCount pow2_minus_one(const Magnitude& K);

    BigCount doubled() const;
    BigCount plus_one() const;
    // ln of the count, +inf beyond double range.
    double ln() const;
    Magnitude log() const;
    std::string to_string() const;
};

bool operator<(const BigCount& a, const BigCount& b);
bool same_count(const BigCount& a, const BigCount& b);
BigCount max(const BigCount& a, const BigCount& b);
BigCount add(const BigCount& a, const BigCount& b);

class RateFunction {
public:
    enum class Kind { InverseLog, Power, Constant, Custom };

    // R(n) = 1 / ceil(log2(n + 2)).
    static RateFunction inverse_log();
    // R(n) = n^{-alpha}, alpha > 0.
    static RateFunction power(double alpha);
    static RateFunction constant(double c);
    static RateFunction custom(std::string name, std::function<double(std::uint64_t)> fn);

    // Parses "inverse-log", "power:0.5", "inverse-sqrt", "inverse-fourth-root", "constant:0.5".
    static RateFunction parse(const std::string& text);

    double operator()(std::uint64_t n) const;

    // -ln R(n) for R(n) <= 1; valid beyond 64-bit range for the named kinds.
    Magnitude neg_log_at(const BigCount& n) const;

    struct Step {
        BigCount n;
        // Lower bound on -ln R(n) - theta guaranteed by the inverse used to
        // find n (ceiling rounding), for when the two cannot be told apart
        // numerically.
        double certified_slack = 0.0;
    };

    // Smallest n > lower_exclusive with -ln R(n) >= theta (1e-12 slack in the
    // log domain). Empty when no such n is reachable: the search budget ran
    // out (custom rates) or the rate never gets that small.
    std::optional<Step> smallest_with_neg_log_at_least(const Magnitude& theta, const BigCount& lower_exclusive,
                                                       std::uint64_t budget, std::string* why = nullptr) const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    Kind kind_ = Kind::Power;
    double param_ = 0.5;
    std::string name_;
    std::function<double(std::uint64_t)> fn_;
};

struct LemmaChecks {
    std::vector<bool> tail_bound;   // property (1) per index
    std::vector<bool> mass_ratio;   // property (2)
    std::vector<bool> rate_match;   // property (3)
    bool c_at_least_half = false;
    bool normalized = false;        // |sum p - 1| <= 1e-12
    bool rate_decreased = false;    // R(n_depth) < R(n_1)
    std::vector<double> tail_margin;  // ln(n_i sum_{j > i} p_{k_j}); -inf for the last index

    bool all_tail_bound() const;
    bool all_mass_ratio() const;
    bool all_rate_match() const;
    bool all() const;
};

struct LemmaArtifacts {
    std::string rate_name;
    std::uint64_t depth = 0;
    std::vector<BigCount> n;
    std::vector<BigCount> k;
    std::vector<BigCount> sigma;        // sigma[i] = k_1 + ... + k_{i+1}; sigma_0 = 0 is implicit
    std::vector<Magnitude> neg_log_rate;  // -ln R(n_i)
    std::vector<Magnitude> neg_log_p;     // -ln p_{k_i}
    std::vector<double> log_rate;       // ln R(n_i), -inf beyond double range
    std::vector<double> log_p;          // ln p_{k_i}, -inf beyond double range
    std::vector<double> p;              // p_{k_i} (underflows to 0 for deep indices)
    // step_slack[i] = -ln R(n_{i+2}) - theta_{i+1}, where theta_i is the
    // target -ln min(R(n_i)/2, R(n_1)/(2 n_i)) of step i.
    std::vector<double> step_slack;
    double log_C = 0.0;
    double C = 0.0;
    bool c_exceeds_one = false;         // normalization pushed C above 1
    bool truncated = true;              // the infinite construction is cut at `depth`
    double sum_p = 0.0;
    LemmaChecks checks;
};

// Greedy construction (see README): n_1 is the first n with R(n) < 1, then
// n_{i+1} is the smallest n > 2 n_i with R(n) <= min(R(n_i)/2, R(n_1)/(2 n_i)),
// k_i = max(n_i, k_{i-1} + 1) and p_{k_i} = R(n_i) / sum_j R(n_j).
// Throws InvalidArgument for rate values outside (0, 1] and
// ConstructionFailure when a step cannot be completed.
LemmaArtifacts lemma512_construct(const RateFunction& rate, std::uint64_t depth,
                                  std::uint64_t search_budget = 10'000'000);

// Recomputes the property suite from the stored sequences. Property (1) is
// evaluated as ln C + ln(n_i R(n_{i+1})) + ln(1 + sum_{j > i+1} R(n_j)/R(n_{i+1})),
// with ln(n_i R(n_{i+1})) expanded through theta_i so that no two numbers of
// tower size are subtracted. step_slack is recomputed wherever it can be
// resolved and taken from the artifacts only where it cannot.
LemmaChecks verify_lemma512(const LemmaArtifacts& art);

}  // namespace aglab
