#include "aglab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aglab/errors.hpp"

namespace aglab {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_csv(const std::vector<RatePoint>& points) {
    std::ostringstream os;
    os << "n,metric,estimate,std_error,bound,method,trials\n";
    for (const auto& p : points) {
        os << p.n << ',' << to_string(p.metric) << ',' << format_real(p.estimate) << ','
           << format_real(p.std_error) << ',' << format_real(p.bound) << ',' << to_string(p.method) << ','
           << p.trials << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json real(double x) {
    if (std::isnan(x) || std::isinf(x)) return nullptr;
    return x;
}

nlohmann::json count(const BigCount& c) {
    nlohmann::json j;
    if (c.exact) {
        j["value"] = *c.exact;
    } else {
        j["value"] = nullptr;
    }
    const double ln = c.ln();
    if (std::isfinite(ln)) {
        j["ln"] = ln;
    } else {
        j["ln"] = nullptr;
    }
    j["text"] = c.to_string();
    return j;
}

}  // namespace

nlohmann::json to_json(const RatePoint& p) {
    return {{"n", p.n},
            {"metric", to_string(p.metric)},
            {"estimate", real(p.estimate)},
            {"std_error", real(p.std_error)},
            {"bound", real(p.bound)},
            {"method", to_string(p.method)},
            {"trials", p.trials}};
}

nlohmann::json to_json(const std::vector<RatePoint>& points) {
    auto arr = nlohmann::json::array();
    for (const auto& p : points) arr.push_back(to_json(p));
    return arr;
}

nlohmann::json to_json(const LemmaArtifacts& art) {
    nlohmann::json j;
    j["rate"] = art.rate_name;
    j["depth"] = art.depth;
    j["C"] = real(art.C);
    j["ln_C"] = art.log_C;
    j["c_exceeds_one"] = art.c_exceeds_one;
    j["truncated"] = art.truncated;
    j["sum_p"] = art.sum_p;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < art.n.size(); ++i) {
        rows.push_back({{"i", i + 1},
                        {"n", count(art.n[i])},
                        {"k", count(art.k[i])},
                        {"sigma", count(art.sigma[i])},
                        {"neg_ln_rate", art.neg_log_rate[i].to_string()},
                        {"p", real(art.p[i])},
                        {"neg_ln_p", art.neg_log_p[i].to_string()},
                        {"tail_margin", real(art.checks.tail_margin[i])},
                        {"tail_bound", static_cast<bool>(art.checks.tail_bound[i])},
                        {"mass_ratio", static_cast<bool>(art.checks.mass_ratio[i])},
                        {"rate_match", static_cast<bool>(art.checks.rate_match[i])}});
    }
    auto slack = nlohmann::json::array();
    for (double s : art.step_slack) slack.push_back(real(s));
    j["sequence"] = rows;
    j["step_slack"] = slack;
    j["properties"] = {{"tail_bound", art.checks.all_tail_bound()},
                       {"mass_ratio", art.checks.all_mass_ratio()},
                       {"rate_match", art.checks.all_rate_match()},
                       {"c_at_least_half", art.checks.c_at_least_half},
                       {"normalized", art.checks.normalized},
                       {"rate_decreased", art.checks.rate_decreased}};
    return j;
}

std::string format_csv(const LemmaArtifacts& art) {
    std::ostringstream os;
    os << "i,n,k,sigma,p,neg_log_p,tail_bound,mass_ratio,rate_match\n";
    for (std::size_t i = 0; i < art.n.size(); ++i) {
        os << i + 1 << ',' << art.n[i].to_string() << ',' << art.k[i].to_string() << ','
           << art.sigma[i].to_string() << ',' << format_real(art.p[i]) << ',' << art.neg_log_p[i].to_string() << ','
           << art.checks.tail_bound[i] << ',' << art.checks.mass_ratio[i] << ',' << art.checks.rate_match[i]
           << '\n';
    }
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw ConfigError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace aglab
