#pragma once

#include <json.hpp>

#include "recmle/closedform.hpp"
#include "recmle/estimate.hpp"
#include "recmle/family.hpp"
#include "recmle/montecarlo.hpp"

namespace recmle {

// Keys are emitted in declaration order so that output is byte-stable.
using Json = nlohmann::ordered_json;

// {"family", "source", "n_or_m", "sufficient_stat", "theta_hat"}
Json to_json(const EstimateReport& r);
Json to_json(const SeriesValue& s);
Json to_json(const ExperimentConfig& c);
Json to_json(const MomentReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const ConsistencyPoint& p);

}  // namespace recmle
