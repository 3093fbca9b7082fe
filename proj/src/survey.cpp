#include "cpfact/survey.hpp"

#include <ostream>
#include <sstream>

#include "cpfact/factorizer.hpp"

namespace cpfact {

void enumerate_dnn(Int bound, const std::function<void(const SymMat2&)>& visit) {
    if (bound < 1) throw DomainError("enumerate_dnn: bound must be positive");
    for (Int a = 0; a <= bound; ++a) {
        for (Int c = a; c <= bound; ++c) {
            const Int bmax = isqrt(checked_mul(a, c));
            for (Int b = 0; b <= bmax; ++b) visit(SymMat2{a, b, c});
        }
    }
}

SurveySummary run_survey(Int bound, const SurveyOptions& opts,
                         const std::function<void(const SurveyRow&)>& emit) {
    if (bound < 1) throw DomainError("run_survey: bound must be positive");
    if (opts.with_oracle && opts.depth_cap < 1)
        throw DomainError("run_survey: depth cap must be positive");

    SurveySummary summary;
    OracleCache cache;
    const bool verify_all = bound <= 30;

    enumerate_dnn(bound, [&](const SymMat2& m) {
        SurveyRow row;
        row.a = m.a;
        row.b = m.b;
        row.c = m.c;
        try {
            row.det = det2(m);
            const Factorization f = factor(m);
            row.terms_paper = static_cast<Int>(f.terms.size());
            if (verify_all || summary.rows % 100 == 0) {
                if (!verify_factorization(f))
                    throw std::logic_error("survey: factorization failed verification");
            }
            if (opts.with_oracle) {
                const MinRankResult min = min_cp_rank(m, opts.depth_cap, cache);
                row.min_status = min.status;
                if (min.status == SearchStatus::Exact) {
                    row.terms_min = min.min_terms;
                    const Int gap = row.terms_paper - min.min_terms;
                    ++summary.gap_hist[gap];
                    if (gap > summary.max_gap || !summary.max_gap_witness) {
                        summary.max_gap = gap;
                        summary.max_gap_witness = m;
                    }
                } else {
                    ++summary.capped_rows;
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(e.what()) + " (at matrix " + to_text(m) + ")");
        }
        ++summary.rows;
        ++summary.paper_hist[row.terms_paper];
        emit(row);
    });
    return summary;
}

void write_csv_header(std::ostream& os) {
    os << "a,b,c,det,terms_paper,terms_min,min_status\n";
}

void write_csv_row(std::ostream& os, const SurveyRow& row) {
    os << row.a << ',' << row.b << ',' << row.c << ',' << row.det << ',' << row.terms_paper
       << ',';
    if (row.terms_min) os << *row.terms_min;
    os << ',';
    if (row.min_status) os << to_string(*row.min_status);
    os << '\n';
}

void write_csv_summary(std::ostream& os, const SurveySummary& summary,
                       const SurveyOptions& opts) {
    os << "# rows: " << summary.rows << '\n';
    os << "# terms_paper histogram:";
    for (const auto& [terms, count] : summary.paper_hist) os << ' ' << terms << ':' << count;
    os << '\n';
    if (opts.with_oracle) {
        os << "# oracle: depth_cap=" << opts.depth_cap
           << " exact=" << (summary.rows - summary.capped_rows)
           << " depth-capped=" << summary.capped_rows << '\n';
        os << "# gap histogram (terms_paper - terms_min):";
        for (const auto& [gap, count] : summary.gap_hist) os << ' ' << gap << ':' << count;
        os << '\n';
        if (summary.max_gap_witness)
            os << "# max gap: " << summary.max_gap << " at " << *summary.max_gap_witness
               << '\n';
    }
}

SurveySummary run_survey_csv(Int bound, const SurveyOptions& opts, std::ostream& os) {
    write_csv_header(os);
    const SurveySummary summary =
        run_survey(bound, opts, [&os](const SurveyRow& row) { write_csv_row(os, row); });
    write_csv_summary(os, summary, opts);
    return summary;
}

std::vector<SurveyRow> run_survey_collect(Int bound, const SurveyOptions& opts,
                                          SurveySummary* summary) {
    std::vector<SurveyRow> rows;
    const SurveySummary s =
        run_survey(bound, opts, [&rows](const SurveyRow& row) { rows.push_back(row); });
    if (summary) *summary = s;
    return rows;
}

} // namespace cpfact
