#include "rptsc/rank.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace rptsc {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

TiePolicy parse_tie_policy(const std::string& text) {
    if (text == "average") {
        return TiePolicy::Average;
    }
    if (text == "min") {
        return TiePolicy::Min;
    }
    if (text == "dense") {
        return TiePolicy::Dense;
    }
    throw std::invalid_argument("unknown tie policy '" + text + "' (expected average, min or dense)");
}

std::string to_string(TiePolicy policy) {
    switch (policy) {
    case TiePolicy::Average:
        return "average";
    case TiePolicy::Min:
        return "min";
    case TiePolicy::Dense:
        return "dense";
    }
    return "?";
}

std::vector<std::optional<double>> rank_row(const std::vector<std::optional<double>>& row, TiePolicy policy) {
    std::vector<std::size_t> present;
    for (std::size_t a = 0; a < row.size(); ++a) {
        if (row[a]) {
            present.push_back(a);
        }
    }
    std::stable_sort(present.begin(), present.end(), [&](std::size_t x, std::size_t y) { return *row[x] < *row[y]; });

    std::vector<std::optional<double>> ranks(row.size());
    std::size_t dense = 0;
    for (std::size_t i = 0; i < present.size();) {
        std::size_t j = i;
        while (j < present.size() && *row[present[j]] == *row[present[i]]) {
            ++j;
        }
        ++dense;
        double r = 0.0;
        switch (policy) {
        case TiePolicy::Average:
            r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            break;
        case TiePolicy::Min:
            r = static_cast<double>(i + 1);
            break;
        case TiePolicy::Dense:
            r = static_cast<double>(dense);
            break;
        }
        for (std::size_t k = i; k < j; ++k) {
            ranks[present[k]] = r;
        }
        i = j;
    }
    return ranks;
}

RankSummary rank_table(const ResultTable& table, TiePolicy policy) {
    const std::size_t k = table.algorithms.size();
    if (k == 0 || table.errors.empty()) {
        throw std::invalid_argument("rank table needs at least one algorithm and one dataset");
    }
    RankSummary s;
    s.wins.assign(k, 0);
    s.average_rank.assign(k, 0.0);
    std::vector<std::size_t> counted(k, 0);
    for (const auto& row : table.errors) {
        if (row.size() != k) {
            throw std::invalid_argument("rank table row has " + std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(k));
        }
        auto ranks = rank_row(row, policy);
        std::optional<double> best;
        for (const auto& v : row) {
            if (v && (!best || *v < *best)) {
                best = v;
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            if (!ranks[a]) {
                continue;
            }
            s.average_rank[a] += *ranks[a];
            ++counted[a];
            if (*row[a] == *best) {
                ++s.wins[a];
            }
        }
        s.ranks.push_back(std::move(ranks));
    }
    for (std::size_t a = 0; a < k; ++a) {
        s.average_rank[a] = counted[a] ? s.average_rank[a] / static_cast<double>(counted[a]) : 0.0;
    }
    return s;
}

ResultTable parse_result_csv(std::string_view content) {
    ResultTable t;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        auto fields = split_fields(stripped);
        if (header) {
            if (fields.size() < 2) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": header needs a dataset column and algorithms");
            }
            t.algorithms.assign(fields.begin() + 1, fields.end());
            header = false;
            continue;
        }
        if (fields.size() != t.algorithms.size() + 1) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(t.algorithms.size() + 1) + " fields");
        }
        t.datasets.push_back(fields.front());
        std::vector<std::optional<double>> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto& f = fields[i];
            if (f.empty() || f == "-") {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": non-numeric cell '" + f + "'");
            }
            row.emplace_back(v);
        }
        t.errors.push_back(std::move(row));
    }
    if (header) {
        throw std::invalid_argument("result table is empty");
    }
    return t;
}

std::string result_csv(const ResultTable& table) {
    std::string out = "dataset";
    for (const auto& a : table.algorithms) {
        out += ',' + a;
    }
    out += '\n';
    for (std::size_t d = 0; d < table.errors.size(); ++d) {
        out += d < table.datasets.size() ? table.datasets[d] : std::to_string(d);
        for (const auto& v : table.errors[d]) {
            out += ',';
            if (v) {
                append_number(out, *v);
            } else {
                out += '-';
            }
        }
        out += '\n';
    }
    return out;
}

std::string rank_csv(const ResultTable& table, const RankSummary& summary) {
    std::string out = "metric";
    for (const auto& a : table.algorithms) {
        out += ',' + a;
    }
    out += "\n# wins";
    for (std::size_t w : summary.wins) {
        out += ',' + std::to_string(w);
    }
    out += "\nAve.Rank";
    for (double r : summary.average_rank) {
        out += ',';
        append_number(out, r);
    }
    out += '\n';
    return out;
}

} // namespace rptsc
