#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aglab/eval.hpp"
#include "aglab/sequence.hpp"

namespace aglab {

// CSV with columns n,metric,estimate,std_error,bound,method,trials; reals
// printed with 17 significant digits.
std::string format_csv(const std::vector<RatePoint>& points);

nlohmann::json to_json(const RatePoint& p);
nlohmann::json to_json(const std::vector<RatePoint>& points);
nlohmann::json to_json(const LemmaArtifacts& art);

// Rows i,n,k,sigma,p,neg_log_p,tail_bound,mass_ratio,rate_match.
std::string format_csv(const LemmaArtifacts& art);

// Shortest-exact decimal form used in every CSV cell.
std::string format_real(double x);

// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace aglab
