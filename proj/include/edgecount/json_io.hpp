#pragma once

#include "json.hpp"

#include "edgecount/edge_tests.hpp"
#include "edgecount/graph.hpp"
#include "edgecount/nulldist.hpp"
#include "edgecount/stein.hpp"

namespace edgecount {

using Json = nlohmann::ordered_json;

Json to_json(const PermNullMoments& m);
Json to_json(const BootNullMoments& m);
Json to_json(const TestResult& r);
Json to_json(const ConditionReport& r);
Json to_json(const SteinBoundEstimate& e);

/// Non-finite doubles become null so the output stays valid JSON.
Json number_or_null(double v);

}  // namespace edgecount
