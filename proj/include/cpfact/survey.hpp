#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "cpfact/oracle.hpp"

namespace cpfact {

// One surveyed matrix: the paper algorithm's term count, and optionally the
// oracle's exact minimum.
struct SurveyRow {
    Int a{0}, b{0}, c{0};
    Int det{0};
    Int terms_paper{0};
    std::optional<Int> terms_min;
    std::optional<SearchStatus> min_status;
};

// Yields every doubly nonnegative (a, b, c) with 0 <= a <= c <= bound and
// 0 <= b <= isqrt(a*c), exactly once, in lexicographic (a, c, b) order.
// The orientation a <= c is canonical; transposes are not repeated.
void enumerate_dnn(Int bound, const std::function<void(const SymMat2&)>& visit);

struct SurveyOptions {
    bool with_oracle{false};
    Int depth_cap{12};
};

struct SurveySummary {
    std::uint64_t rows{0};
    std::map<Int, std::uint64_t> paper_hist;          // terms_paper -> count
    std::map<Int, std::uint64_t> gap_hist;            // terms_paper - terms_min -> count
    Int max_gap{0};
    std::optional<SymMat2> max_gap_witness;
    std::uint64_t capped_rows{0};
};

// Runs the factorizer (and optionally the oracle) over every matrix
// enumerated at `bound`, streaming one row per matrix in enumeration order.
// Every factorization is re-verified: always for bound <= 30, on a
// deterministic 1% sample otherwise. Failures surface as errors naming the
// offending matrix.
SurveySummary run_survey(Int bound, const SurveyOptions& opts,
                         const std::function<void(const SurveyRow&)>& emit);

// CSV schema: header `a,b,c,det,terms_paper,terms_min,min_status`; absent
// oracle values render as empty fields; the summary follows as `#` lines.
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const SurveyRow& row);
void write_csv_summary(std::ostream& os, const SurveySummary& summary, const SurveyOptions& opts);
SurveySummary run_survey_csv(Int bound, const SurveyOptions& opts, std::ostream& os);

// Convenience for tests and small bounds; collects all rows in memory.
std::vector<SurveyRow> run_survey_collect(Int bound, const SurveyOptions& opts,
                                          SurveySummary* summary = nullptr);

} // namespace cpfact
