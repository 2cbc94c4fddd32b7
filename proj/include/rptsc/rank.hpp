#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rptsc {

/// How tied error rates on one dataset share rank positions.
///  - Average: tied entries get the mean of the positions they occupy (1, 2.5, 2.5, 4).
///  - Min: tied entries all get the lowest position (1, 2, 2, 4).
///  - Dense: distinct error values are ranked consecutively (1, 2, 2, 3).
enum class TiePolicy { Average, Min, Dense };

TiePolicy parse_tie_policy(const std::string& text);
std::string to_string(TiePolicy policy);

/// Error rates indexed [dataset][algorithm]; nullopt marks a missing cell.
struct ResultTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    std::vector<std::vector<std::optional<double>>> errors;
};

struct RankSummary {
    std::vector<std::size_t> wins;        ///< per algorithm; shared minima count for everyone tied
    std::vector<double> average_rank;     ///< per algorithm, over the datasets where it has an entry
    /// Per dataset, per algorithm rank (nullopt for missing cells).
    std::vector<std::vector<std::optional<double>>> ranks;
};

/// Ranks of the present values in one row, ascending error.
std::vector<std::optional<double>> rank_row(const std::vector<std::optional<double>>& row, TiePolicy policy);

/// Throws std::invalid_argument on an empty or ragged table.
RankSummary rank_table(const ResultTable& table, TiePolicy policy = TiePolicy::Dense);

/// CSV with a "dataset" column followed by one column per algorithm; "-" or an
/// empty field marks a missing cell.
ResultTable parse_result_csv(std::string_view content);
std::string result_csv(const ResultTable& table);

/// Rows "# wins" and "Ave.Rank" in the same column layout.
std::string rank_csv(const ResultTable& table, const RankSummary& summary);

} // namespace rptsc
