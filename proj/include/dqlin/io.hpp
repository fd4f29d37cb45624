#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqlin/evolution.hpp"
#include "dqlin/linsys.hpp"
#include "dqlin/symbol.hpp"

namespace dqlin {

/// Shortest round-trippable text for a double (17 significant digits).
std::string format_double(double v);

nlohmann::json symbol_to_json(const GaussPolySymbol& F);
GaussPolySymbol symbol_from_json(const nlohmann::json& j);

/// Time grid plus row-major Gamma, Lambda and v at the stored samples.
nlohmann::json flow_to_json(const FlowSolution& flow);

nlohmann::json matrix_to_json(const Mat& M);
Mat matrix_from_json(const nlohmann::json& j);

/// CSV with columns t, re, im.
std::string series_to_csv(const ExpectationSeries& s);
nlohmann::json series_to_json(const ExpectationSeries& s);

/// Write via a temporary file in the same directory followed by rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dqlin
