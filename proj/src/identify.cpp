#include "aglab/identify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "aglab/errors.hpp"

namespace aglab {

Sample::Sample(std::vector<UniverseIndex> items) : items_(std::move(items)), n_(items_.size()) {
    std::vector<UniverseIndex> sorted = items_;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& k : sorted) {
        if (k.k == 0) throw InvalidArgument("sample items are 1-based indices");
        if (!distinct_.empty() && distinct_.back().first == k) {
            ++distinct_.back().second;
        } else {
            distinct_.emplace_back(k, 1);
        }
    }
}

Sample Sample::from_counts(const std::vector<std::pair<UniverseIndex, std::uint64_t>>& counts) {
    Sample s;
    for (const auto& [k, c] : counts) {
        if (k.k == 0) throw InvalidArgument("sample items are 1-based indices");
        if (c == 0) continue;
        s.distinct_.emplace_back(k, c);
        s.n_ += c;
    }
    std::sort(s.distinct_.begin(), s.distinct_.end());
    for (std::size_t i = 1; i < s.distinct_.size(); ++i) {
        if (s.distinct_[i].first == s.distinct_[i - 1].first) throw InvalidArgument("duplicate count entry");
    }
    return s;
}

std::vector<UniverseIndex> Sample::items() const {
    if (!items_.empty() || n_ == 0) return items_;
    std::vector<UniverseIndex> out;
    out.reserve(n_);
    for (const auto& [k, c] : distinct_) out.insert(out.end(), c, k);
    return out;
}

std::uint64_t Sample::count(UniverseIndex k) const {
    const auto it = std::lower_bound(distinct_.begin(), distinct_.end(), k,
                                     [](const auto& p, UniverseIndex key) { return p.first < key; });
    return it != distinct_.end() && it->first == k ? it->second : 0;
}

// ---------------------------------------------------------------------------

namespace {

// base^exp compared against n without overflow.
bool power_at_least(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        acc *= base;
        if (acc >= n) return true;
    }
    return acc >= n;
}

}  // namespace

std::uint64_t ceil_root(std::uint64_t n, std::uint64_t degree) {
    if (degree == 0) throw InvalidArgument("root degree must be >= 1");
    if (n <= 1) return 1;
    auto r = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / degree)));
    r = std::max<std::uint64_t>(r, 1);
    while (r > 1 && power_at_least(r - 1, degree, n)) --r;
    while (!power_at_least(r, degree, n)) ++r;
    return r;
}

WindowFn WindowFn::root(std::uint64_t degree) {
    if (degree == 0) throw InvalidArgument("root degree must be >= 1");
    WindowFn f;
    f.kind_ = Kind::Root;
    f.param_ = degree;
    return f;
}

WindowFn WindowFn::constant(std::uint64_t size) {
    if (size == 0) throw InvalidArgument("window size must be >= 1");
    WindowFn f;
    f.kind_ = Kind::Constant;
    f.param_ = size;
    return f;
}

WindowFn WindowFn::log2() {
    WindowFn f;
    f.kind_ = Kind::Log2;
    f.param_ = 0;
    return f;
}

std::uint64_t WindowFn::operator()(std::uint64_t n) const {
    switch (kind_) {
        case Kind::Root:
            return ceil_root(n, param_);
        case Kind::Constant:
            return param_;
        case Kind::Log2:
            // ceil(log2(n + 1)) = bit width of n.
            return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::bit_width(n)));
    }
    return 1;
}

std::string WindowFn::name() const {
    switch (kind_) {
        case Kind::Root:
            return "root:" + std::to_string(param_);
        case Kind::Constant:
            return "constant:" + std::to_string(param_);
        case Kind::Log2:
            return "log2";
    }
    return "?";
}

// ---------------------------------------------------------------------------

std::uint64_t empirical_miss_count(const Language& L, const Sample& S) {
    std::uint64_t miss = 0;
    for (const auto& [k, c] : S.distinct()) {
        if (!L.member(k)) miss += c;
    }
    return miss;
}

namespace {

std::vector<std::uint64_t> window_misses(const Collection& C, const Sample& S, std::uint64_t size) {
    std::vector<std::uint64_t> miss;
    for (const auto& L : C.window(size)) miss.push_back(empirical_miss_count(*L, S));
    if (miss.empty()) throw InvalidArgument("empty identification window");
    return miss;
}

}  // namespace

std::uint64_t erm_select(const std::vector<std::uint64_t>& miss) {
    const auto it = std::min_element(miss.begin(), miss.end());
    return static_cast<std::uint64_t>(it - miss.begin()) + 1;
}

std::uint64_t margin_select(const std::vector<std::uint64_t>& miss, std::uint64_t n, std::uint64_t f) {
    const auto fn = static_cast<unsigned __int128>(f);
    const auto threshold = static_cast<unsigned __int128>(2) * n;
    // Candidate i qualifies when every earlier miss count exceeds miss_i by
    // more than 2n/f, i.e. when the smallest earlier one does.
    std::uint64_t best = 1;
    std::uint64_t prefix_min = miss.empty() ? 0 : miss[0];
    for (std::size_t i = 1; i < miss.size(); ++i) {
        if (prefix_min > miss[i] && static_cast<unsigned __int128>(prefix_min - miss[i]) * fn > threshold) {
            best = i + 1;
        }
        prefix_min = std::min(prefix_min, miss[i]);
    }
    return best;
}

std::uint64_t erm_identify(const Collection& C, const Sample& S, const WindowFn& f) {
    return erm_select(window_misses(C, S, f(S.size())));
}

std::uint64_t margin_identify(const Collection& C, const Sample& S, const WindowFn& f) {
    if (S.empty()) throw InvalidArgument("identification needs n >= 1");
    const std::uint64_t fn = f(S.size());
    // The margin uses f(n) itself even when a finite collection truncates the window.
    return margin_select(window_misses(C, S, fn), S.size(), fn);
}

double theoretical_id_bound(std::uint64_t n, const WindowFn& f) {
    const auto fn = static_cast<double>(f(n));
    const double b = 2.0 * fn * std::exp(-static_cast<double>(n) / (2.0 * fn * fn));
    return std::clamp(b, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t window_reach(const Collection& C, std::uint64_t size) {
    const auto total = C.size();
    return total ? std::min(*total, size) : size;
}

}  // namespace

IdAlgorithm erm_algorithm(WindowFn f) {
    return IdAlgorithm{"erm[" + f.name() + "]",
                       [f](const Collection& C, const Sample& S) { return erm_identify(C, S, f); },
                       [f](const Collection& C, std::uint64_t n) { return window_reach(C, f(n)); }};
}

IdAlgorithm margin_algorithm(WindowFn f) {
    return IdAlgorithm{"margin[" + f.name() + "]",
                       [f](const Collection& C, const Sample& S) { return margin_identify(C, S, f); },
                       [f](const Collection& C, std::uint64_t n) { return window_reach(C, f(n)); }};
}

IdAlgorithm constant_algorithm(std::uint64_t index) {
    if (index == 0) throw InvalidArgument("collection indices are 1-based");
    return IdAlgorithm{"constant[" + std::to_string(index) + "]",
                       [index](const Collection&, const Sample&) { return index; },
                       [index](const Collection&, std::uint64_t) { return index; }};
}

}  // namespace aglab
