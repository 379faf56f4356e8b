#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "aglab/languages.hpp"
#include "aglab/universe.hpp"

namespace aglab {

/// Multiset of draws x_1..x_n. Keeps the ordered items plus sorted
/// (index, count) pairs; algorithms only look at the latter.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<UniverseIndex> items);
    // Representative sample with the given multiplicities (zero counts dropped).
    static Sample from_counts(const std::vector<std::pair<UniverseIndex, std::uint64_t>>& counts);

    std::uint64_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    // Draws in order; a count-built sample lists them sorted.
    std::vector<UniverseIndex> items() const;
    const std::vector<std::pair<UniverseIndex, std::uint64_t>>& distinct() const { return distinct_; }
    std::uint64_t count(UniverseIndex k) const;
    bool contains(UniverseIndex k) const { return count(k) > 0; }

private:
    std::vector<UniverseIndex> items_;
    std::vector<std::pair<UniverseIndex, std::uint64_t>> distinct_;
    std::uint64_t n_ = 0;
};

/// Window size f(n): positive, nondecreasing, unbounded.
class WindowFn {
public:
    enum class Kind { Root, Constant, Log2 };

    // ceil(n^{1/degree}), computed exactly in integers.
    static WindowFn root(std::uint64_t degree);
    static WindowFn fourth_root() { return root(4); }
    // Fixed window; not unbounded, kept for tests and finite collections.
    static WindowFn constant(std::uint64_t size);
    // max(1, ceil(log2(n + 1))).
    static WindowFn log2();

    std::uint64_t operator()(std::uint64_t n) const;
    Kind kind() const { return kind_; }
    std::uint64_t parameter() const { return param_; }
    std::string name() const;

private:
    Kind kind_ = Kind::Root;
    std::uint64_t param_ = 4;
};

// Smallest r >= 1 with r^degree >= n.
std::uint64_t ceil_root(std::uint64_t n, std::uint64_t degree);

std::uint64_t empirical_miss_count(const Language& L, const Sample& S);

// Smallest index i <= f(n) minimizing the miss count.
std::uint64_t erm_identify(const Collection& C, const Sample& S, const WindowFn& f);

// Largest i <= f(n) such that (miss_j - miss_i) f(n) > 2n for every j < i.
std::uint64_t margin_identify(const Collection& C, const Sample& S, const WindowFn& f);

// Same rules on precomputed miss counts of the window, for tracing.
std::uint64_t erm_select(const std::vector<std::uint64_t>& miss);
std::uint64_t margin_select(const std::vector<std::uint64_t>& miss, std::uint64_t n, std::uint64_t f);

// min(1, 2 f(n) exp(-n / (2 f(n)^2))).
double theoretical_id_bound(std::uint64_t n, const WindowFn& f);

/// An identification algorithm: a pure function of the sample's counts
/// returning a 1-based collection index.
struct IdAlgorithm {
    std::string name;
    std::function<std::uint64_t(const Collection&, const Sample&)> run;
    // Largest index the algorithm may return at sample size n.
    std::function<std::uint64_t(const Collection&, std::uint64_t)> reach;
};

IdAlgorithm erm_algorithm(WindowFn f);
IdAlgorithm margin_algorithm(WindowFn f);
// Always answers `index`; useful as a reference point.
IdAlgorithm constant_algorithm(std::uint64_t index);

}  // namespace aglab
