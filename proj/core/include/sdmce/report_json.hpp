#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdmce/adaptive_mu.hpp"
#include "sdmce/metrics.hpp"
#include "sdmce/unfolding.hpp"

namespace sdmce
{

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const FoldingReport& report);
FoldingReport folding_from_json(const nlohmann::json& j);

/**
 * @brief JSON form of a report with a fixed key order.
 *
 * Non-finite values are written as null: NaN angle errors of degenerate
 * corners and infinite Beltrami moduli read back as NaN and +inf.
 * `wall_seconds` is omitted when `timings` is false.
 */
ordered_json to_json(const QualityReport& report, bool timings = true);
QualityReport report_from_json(const nlohmann::json& j);

ordered_json to_json(const std::vector<MuProbe>& history, bool timings = true);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sdmce
