#include "aglab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "aglab/adversary.hpp"
#include "aglab/config.hpp"
#include "aglab/errors.hpp"
#include "aglab/eval.hpp"
#include "aglab/report.hpp"

namespace aglab {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Flags {
    std::string config_path;
    std::string n_grid;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    std::string algorithm;
    std::string window;
    std::string variant;
    std::string method;
    std::uint64_t distractors = 6;
    std::uint64_t m = 0;
    double epsilon = 0.25;
    std::string rate;
    std::uint64_t depth = 0;
    std::vector<std::uint64_t> n_values;
    std::uint64_t generation_window = 0;
};

struct Output {
    std::string csv;
    json body;
};

struct Context {
    std::string subcommand;
    ExperimentConfig config;
    Flags flags;
    CLI::App* app = nullptr;

    bool given(const std::string& flag) const {
        const auto* opt = app->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    }
};

// --- configuration assembly ---------------------------------------------------

void apply_flags(Context& ctx) {
    auto& c = ctx.config;
    const auto& f = ctx.flags;
    if (ctx.given("--n-grid")) c.n_grid = parse_n_grid(f.n_grid);
    if (ctx.given("--trials")) c.trials = f.trials;
    if (ctx.given("--seed")) c.seed = f.seed;
    if (ctx.given("--format")) c.format = f.format;
    if (ctx.given("--algorithm")) c.algorithm = f.algorithm;
    if (ctx.given("--window")) c.window = parse_window(json(f.window));
    if (ctx.given("--variant")) c.variant = f.variant;
    if (ctx.given("--method")) c.method = f.method;
    if (ctx.given("--generation-window")) c.generation_window = f.generation_window;
    if (c.trials && *c.trials == 0) throw ConfigError("trials must be >= 1");
}

// Fixed-instance subcommands take their instance from flags; a config may not
// name another one.
void pin_instance(Context& ctx, const std::string& name, std::vector<std::pair<std::string, std::string>> params) {
    auto& c = ctx.config;
    if (c.collection) throw ConfigError(ctx.subcommand + " does not take a custom collection");
    if (c.instance && *c.instance != name) {
        throw ConfigError(ctx.subcommand + " runs instance '" + name + "', config names '" + *c.instance + "'");
    }
    c.instance = name;
    for (auto& [k, v] : params) {
        auto it = std::find_if(c.instance_params.begin(), c.instance_params.end(),
                               [&](const auto& p) { return p.first == k; });
        if (it == c.instance_params.end()) {
            c.instance_params.emplace_back(k, v);
        } else {
            it->second = v;
        }
    }
}

std::string text_of(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

IdAlgorithm id_algorithm(const ExperimentConfig& c) {
    const auto name = c.algorithm.value_or("margin");
    const WindowFn f = c.window.value_or(WindowFn::fourth_root());
    if (name == "margin") return margin_algorithm(f);
    if (name == "erm") return erm_algorithm(f);
    throw ConfigError("unknown identification algorithm '" + name + "' (margin | erm)");
}

Generator generator(const ExperimentConfig& c) {
    const auto name = c.algorithm.value_or("witness");
    if (name == "witness") return witness_generator(c.generation_window);
    if (name == "first-unseen") return first_unseen_generator();
    throw ConfigError("unknown generator '" + name + "' (witness | first-unseen)");
}

std::size_t variant_index(const Instance& inst, const ExperimentConfig& c) {
    if (c.variant) {
        if (*c.variant == "random") {
            if (!inst.family) throw ConfigError(inst.name + " has no random variant");
            return kRandomFamily;
        }
        for (std::size_t i = 0; i < inst.variants.size(); ++i) {
            if (inst.variants[i].label == *c.variant) return i;
        }
        throw ConfigError("instance " + inst.name + " has no variant '" + *c.variant + "'");
    }
    return inst.variants.empty() ? kRandomFamily : 0;
}

bool want_exact(const ExperimentConfig& c, std::size_t variant) {
    if (c.method == "mc") return false;
    if (variant == kRandomFamily) {
        if (c.method == "exact") throw ConfigError("exact evaluation needs a fixed distribution");
        return false;
    }
    return true;
}

std::vector<std::uint64_t> grid_or(const ExperimentConfig& c, std::vector<std::uint64_t> fallback) {
    return c.n_grid.empty() ? fallback : c.n_grid;
}

// Picks the larger of two points per (n, metric), keeping row order.
std::vector<RatePoint> pointwise_max(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b) {
    std::vector<RatePoint> out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (b[i].estimate > out[i].estimate) out[i] = b[i];
    }
    return out;
}

Output points_output(const Context& ctx, const Instance& inst, const std::string& algorithm,
                     const std::vector<RatePoint>& points) {
    Output o;
    o.csv = format_csv(points);
    o.body = {{"subcommand", ctx.subcommand},
              {"instance", inst.name},
              {"algorithm", algorithm},
              {"config", to_json(ctx.config)},
              {"notes", inst.notes},
              {"points", to_json(points)}};
    return o;
}

// Identification points for one variant, exact when possible.
std::vector<RatePoint> id_points(const IdAlgorithm& alg, const Instance& inst, std::size_t variant,
                                 const ExperimentConfig& c, const std::vector<std::uint64_t>& grid,
                                 const std::function<double(std::uint64_t)>& bound) {
    if (want_exact(c, variant)) {
        std::vector<RatePoint> out;
        try {
            for (auto n : grid) {
                for (auto& p : exact_id_err(alg, inst, variant, n, bound(n))) out.push_back(p);
            }
            return out;
        } catch (const Unsupported&) {
            if (c.method == "exact") throw;
        }
    }
    return mc_rate(id_trial_model(alg, inst, variant), grid, c.trials.value_or(1000), c.seed.value_or(0), bound);
}

std::vector<RatePoint> gen_points(const Generator& gen, const Instance& inst, std::size_t variant,
                                  const ExperimentConfig& c, const std::vector<std::uint64_t>& grid,
                                  const std::function<double(std::uint64_t)>& bound, bool rational) {
    if (want_exact(c, variant)) {
        std::vector<RatePoint> out;
        try {
            for (auto n : grid) {
                const auto& D = *inst.variants.at(variant).dist;
                double e = 0.0;
                if (rational) {
                    e = exact_gen_eval_rational(gen, inst.collection, D, n).gen_err.convert_to<double>();
                } else {
                    e = exact_gen_eval(gen, inst.collection, D, n).gen_err;
                }
                out.push_back(RatePoint{n, Metric::GenErr, e, 0.0, bound(n), Method::Exact, 0});
            }
            return out;
        } catch (const Unsupported&) {
            if (c.method == "exact") throw;
        }
    }
    return mc_rate(gen_trial_model(gen, inst, variant), grid, c.trials.value_or(1000), c.seed.value_or(0), bound);
}

// --- subcommands ----------------------------------------------------------------

Output cmd_id_rate(Context& ctx) {
    auto& c = ctx.config;
    const Instance inst = instance_from_config(c, "id-lower");
    const auto alg = id_algorithm(c);
    const auto variant = variant_index(inst, c);
    const WindowFn f = c.window.value_or(WindowFn::fourth_root());
    const bool margin = c.algorithm.value_or("margin") == "margin";
    auto bound = [f, margin](std::uint64_t n) { return margin ? theoretical_id_bound(n, f) : kNaN; };
    const auto grid = grid_or(c, parse_n_grid("pow2:1..12"));
    return points_output(ctx, inst, alg.name, id_points(alg, inst, variant, c, grid, bound));
}

Output cmd_gen_rate(Context& ctx) {
    auto& c = ctx.config;
    const Instance inst = instance_from_config(c, "gen-witness-demo");
    const auto gen = generator(c);
    const auto variant = variant_index(inst, c);
    std::function<double(std::uint64_t)> bound = inst.bound;
    if (variant != kRandomFamily && inst.variants[variant].analytics.gen) {
        const GenConstants g = *inst.variants[variant].analytics.gen;
        bound = [g](std::uint64_t n) { return g.bound(n); };
    }
    const auto grid = grid_or(c, parse_n_grid("pow2:0..6"));
    return points_output(ctx, inst, gen.name, gen_points(gen, inst, variant, c, grid, bound, false));
}

Output cmd_id_lower(Context& ctx) {
    std::vector<std::pair<std::string, std::string>> params;
    if (ctx.given("--distractors")) params.emplace_back("distractors", std::to_string(ctx.flags.distractors));
    pin_instance(ctx, "id-lower", params);
    auto& c = ctx.config;
    const Instance inst = instance_from_config(c, "id-lower");
    const auto alg = id_algorithm(c);
    const auto grid = grid_or(c, parse_n_grid("2..16"));
    auto p0 = id_points(alg, inst, 0, c, grid, inst.bound);
    auto p1 = id_points(alg, inst, 1, c, grid, inst.bound);
    std::vector<RatePoint> out;
    for (const auto& p : pointwise_max(p0, p1)) {
        if (p.metric == Metric::IdErr) out.push_back(p);
    }
    return points_output(ctx, inst, alg.name, out);
}

Output cmd_gen_lower(Context& ctx) {
    std::vector<std::pair<std::string, std::string>> params;
    if (ctx.given("--m")) params.emplace_back("m", std::to_string(ctx.flags.m));
    pin_instance(ctx, "gen-lower", params);
    auto& c = ctx.config;
    const Instance inst = instance_from_config(c, "gen-lower");
    const auto gen = generator(c);
    const auto grid = grid_or(c, inst.checkpoints.empty() ? parse_n_grid("2..12") : inst.checkpoints);
    auto p0 = gen_points(gen, inst, 0, c, grid, inst.bound, true);
    auto p1 = gen_points(gen, inst, 1, c, grid, inst.bound, true);
    return points_output(ctx, inst, gen.name, pointwise_max(p0, p1));
}

Output cmd_nfl(Context& ctx) {
    std::vector<std::pair<std::string, std::string>> params;
    if (ctx.given("--epsilon")) params.emplace_back("epsilon", text_of(ctx.flags.epsilon));
    pin_instance(ctx, "nfl", params);
    auto& c = ctx.config;
    if (c.method == "exact") throw ConfigError("nfl draws a random label sequence; exact evaluation is unavailable");
    const Instance inst = instance_from_config(c, "nfl");
    const auto gen = generator(c);
    const auto grid = grid_or(c, parse_n_grid("1..20"));
    auto points = mc_rate(gen_trial_model(gen, inst, kRandomFamily), grid, c.trials.value_or(10000),
                          c.seed.value_or(0), inst.bound);
    return points_output(ctx, inst, gen.name, points);
}

Output cmd_slow_rate(Context& ctx) {
    std::vector<std::pair<std::string, std::string>> params;
    if (ctx.given("--rate")) params.emplace_back("rate", ctx.flags.rate);
    if (ctx.given("--depth")) params.emplace_back("depth", std::to_string(ctx.flags.depth));
    pin_instance(ctx, "slow-rate", params);
    auto& c = ctx.config;
    if (c.method == "exact") throw ConfigError("slow-rate draws a random label sequence; exact evaluation is unavailable");
    const Instance inst = instance_from_config(c, "slow-rate");
    const auto alg = id_algorithm(c);
    std::vector<std::uint64_t> checkpoints;
    for (auto n : inst.checkpoints) {
        if (n < 100000) checkpoints.push_back(n);
    }
    const auto grid = grid_or(c, checkpoints);
    auto points = mc_rate(id_trial_model(alg, inst, kRandomFamily), grid, c.trials.value_or(2000),
                          c.seed.value_or(0), inst.bound);
    auto o = points_output(ctx, inst, alg.name, points);
    o.body["checkpoints"] = inst.checkpoints;
    return o;
}

Output cmd_lemma512(Context& ctx) {
    const auto rate = RateFunction::parse(ctx.given("--rate") ? ctx.flags.rate : "inverse-log");
    const std::uint64_t depth = ctx.given("--depth") ? ctx.flags.depth : 10;
    if (depth == 0) throw ConfigError("depth must be >= 1");
    const auto art = lemma512_construct(rate, depth);
    Output o;
    o.csv = format_csv(art);
    o.body = to_json(art);
    return o;
}

Output cmd_appendix(Context& ctx) {
    std::vector<std::uint64_t> grid = ctx.flags.n_values;
    if (grid.empty()) grid = grid_or(ctx.config, {10, 100, 1000, 10000});
    std::ostringstream csv;
    csv << "n,index,value,lower,upper,inside\n";
    auto rows = json::array();
    for (auto n : grid) {
        const auto r = best_reference_index(n);
        const double x = static_cast<double>(n) * std::log(2.0);
        const double lo = std::log2(x);
        const double hi = std::log2(x * x + 1.0);
        const auto i = static_cast<double>(r.index);
        const bool inside = i >= lo && i <= hi;
        csv << n << ',' << r.index << ',' << format_real(r.value) << ',' << format_real(lo) << ','
            << format_real(hi) << ',' << (inside ? 1 : 0) << '\n';
        rows.push_back({{"n", n}, {"index", r.index}, {"value", r.value}, {"lower", lo}, {"upper", hi},
                        {"inside", inside}, {"scanned", r.scanned}});
    }
    Output o;
    o.csv = csv.str();
    o.body = {{"subcommand", ctx.subcommand}, {"rows", rows}};
    return o;
}

// --- output -------------------------------------------------------------------

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const Context& ctx, const Output& o, const std::vector<std::string>& args, double seconds,
          std::ostream& out) {
    const std::string format = ctx.config.format.value_or(ctx.subcommand == "lemma512" ? "json" : "csv");
    const std::string body = format == "json" ? o.body.dump(2) + "\n" : o.csv;
    std::string path = ctx.flags.out;
    // Relative or missing --out lands under $AGLAB_OUT_DIR when it is set.
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
        if (path.empty()) {
            path = (std::filesystem::path(dir) / (ctx.subcommand + "." + format)).string();
        } else if (std::filesystem::path(path).is_relative()) {
            path = (std::filesystem::path(dir) / path).string();
        }
    }
    if (path.empty()) {
        out << body;
        return;
    }
    write_file_atomic(path, body);
    json manifest = {{"tool", "aglab"},
                     {"version", kToolVersion},
                     {"subcommand", ctx.subcommand},
                     {"argv", args},
                     {"config", to_json(ctx.config)},
                     {"outputs", {path}},
                     {"finished_utc", utc_now()},
                     {"wall_seconds", seconds},
                     {"assertions", {{"consistency_failures", 0}}}};
    write_file_atomic(path + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Agnostic language identification and generation laboratory", "aglab"};
    app.require_subcommand(1);
    Flags flags;

    struct Spec {
        const char* name;
        const char* help;
        Output (*fn)(Context&);
    };
    const Spec specs[] = {
        {"id-rate", "identification error curve for an instance", cmd_id_rate},
        {"gen-rate", "generation error curve for an instance", cmd_gen_rate},
        {"id-lower", "max identification error over the mirrored signature distributions", cmd_id_lower},
        {"gen-lower", "max generation error over the two finite-intersection distributions", cmd_gen_lower},
        {"nfl", "generation error under uniformly random labels", cmd_nfl},
        {"slow-rate", "identification error at the sequence checkpoints", cmd_slow_rate},
        {"lemma512", "construct and check the rate-matching sequences", cmd_lemma512},
        {"appendix-example", "maximizer of (1 - 2^-i)^n / i", cmd_appendix},
    };
    std::vector<std::pair<CLI::App*, const Spec*>> subs;
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", flags.config_path, "experiment config (JSON, schema 1)");
        sub->add_option("--n-grid", flags.n_grid, "sample sizes, e.g. 1,2,4 or 2..16 or pow2:1..12");
        sub->add_option("--trials", flags.trials, "Monte Carlo trials per n");
        sub->add_option("--seed", flags.seed, "master seed");
        sub->add_option("--out", flags.out, "output file, relative to $AGLAB_OUT_DIR when set (default: stdout)");
        sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--method", flags.method, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}));
        const std::string name = s.name;
        if (name == "id-rate" || name == "gen-rate") {
            sub->add_option("--variant", flags.variant, "distribution variant label, or random");
        }
        if (name == "id-rate" || name == "id-lower" || name == "slow-rate") {
            sub->add_option("--algorithm", flags.algorithm, "margin or erm");
            sub->add_option("--window", flags.window, "window f(n): root:4, constant:k or log2");
        }
        if (name == "gen-rate" || name == "gen-lower" || name == "nfl") {
            sub->add_option("--generator,--algorithm", flags.algorithm, "witness or first-unseen");
            sub->add_option("--generation-window", flags.generation_window, "languages scanned by witness");
        }
        if (name == "id-lower") sub->add_option("--distractors", flags.distractors, "distractor languages");
        if (name == "gen-lower") sub->add_option("--m", flags.m, "size of the intersection");
        if (name == "nfl") sub->add_option("--epsilon", flags.epsilon, "target error gap");
        if (name == "slow-rate" || name == "lemma512") {
            sub->add_option("--rate", flags.rate, "inverse-log, inverse-sqrt, inverse-fourth-root, power:a");
            sub->add_option("--depth", flags.depth, "number of constructed blocks");
        }
        if (name == "appendix-example") sub->add_option("--n", flags.n_values, "sample sizes");
        subs.emplace_back(sub, &s);
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        for (auto& [sub, spec] : subs) {
            if (!sub->parsed()) continue;
            Context ctx;
            ctx.subcommand = spec->name;
            ctx.flags = flags;
            ctx.app = sub;
            if (!flags.config_path.empty()) ctx.config = load_config(flags.config_path);
            apply_flags(ctx);
            const Output o = spec->fn(ctx);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            emit(ctx, o, args, seconds, out);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const ConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const ConstructionFailure& e) {
        err << "construction failed: " << e.what() << "\n";
        return 1;
    } catch (const Unsupported& e) {
        err << "unsupported: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace aglab
