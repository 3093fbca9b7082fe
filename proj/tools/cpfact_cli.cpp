// cpfact: exact integer cp-factorization of symmetric 2x2 matrices.
//
// Subcommands: factor, verify, minrank, fsq, survey. Matrices are given as
// three integers "a b c" for [[a, b], [b, c]]. Exit codes: 0 success,
// 1 parse error, 2 domain violation, 3 verification failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpfact/factorizer.hpp"
#include "cpfact/json_io.hpp"
#include "cpfact/matrix_core.hpp"
#include "cpfact/oracle.hpp"
#include "cpfact/survey.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerify = 3;
constexpr int kExitInternal = 4;

struct Options {
    std::vector<std::string> matrix_tokens;
    std::string file;
    std::string terms_file;
    std::string output;
    std::string format{"text"};
    bool trace{false};
    bool with_oracle{false};
    cpfact::Int depth_cap{12};
    cpfact::Int bound{10};
    cpfact::Int fsq_n{0};
};

bool json_format(const Options& opt) { return opt.format != "text"; }

// Output sink: --output PATH or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw cpfact::DomainError("cannot open output file: " + path);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

cpfact::SymMat2 matrix_from_tokens(const std::vector<std::string>& tokens) {
    std::string joined;
    for (const std::string& t : tokens) {
        if (!joined.empty()) joined += ' ';
        joined += t;
    }
    return cpfact::parse_matrix(joined);
}

void require_dnn(const cpfact::SymMat2& m) {
    if (m.a < 0 || m.b < 0 || m.c < 0)
        throw cpfact::DomainError("matrix has a negative entry: " + cpfact::to_text(m));
    if (cpfact::det2(m) < 0)
        throw cpfact::DomainError("matrix has a negative determinant: " +
                                  cpfact::to_text(m));
}

void print_factorization_text(std::ostream& os, const cpfact::Factorization& f) {
    os << "matrix: " << cpfact::to_text(f.source) << "\n";
    os << "terms (" << f.terms.size() << "):";
    for (const cpfact::RankOneTerm& t : f.terms) os << ' ' << t;
    os << "\n";
}

int factor_one(const cpfact::SymMat2& m, const Options& opt, std::ostream& os) {
    require_dnn(m);
    cpfact::TraceLog trace;
    const cpfact::Factorization f = cpfact::factor(m, opt.trace ? &trace : nullptr);
    if (opt.trace) cpfact::render_trace(trace, os);
    if (json_format(opt))
        os << cpfact::to_json(f).dump(2) << "\n";
    else
        print_factorization_text(os, f);
    return kExitOk;
}

int cmd_factor(const Options& opt) {
    Sink sink(opt.output);
    if (!opt.file.empty()) {
        std::ifstream in(opt.file);
        if (!in) throw cpfact::DomainError("cannot open matrix file: " + opt.file);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            try {
                factor_one(cpfact::parse_matrix(line), opt, sink.stream());
            } catch (const cpfact::ParseError& e) {
                throw cpfact::ParseError(std::string(e.what()) + " (line " +
                                             std::to_string(lineno) + ")",
                                         lineno);
            }
        }
        return kExitOk;
    }
    return factor_one(matrix_from_tokens(opt.matrix_tokens), opt, sink.stream());
}

int cmd_verify(const Options& opt) {
    Sink sink(opt.output);
    const cpfact::SymMat2 m = matrix_from_tokens(opt.matrix_tokens);
    std::ifstream in(opt.terms_file);
    if (!in) throw cpfact::DomainError("cannot open terms file: " + opt.terms_file);
    cpfact::Factorization f;
    f.source = m;
    f.terms = cpfact::parse_terms(in);
    f.method = cpfact::Method::External;

    const cpfact::SymMat2 sum = cpfact::sum_terms(f.terms);
    if (cpfact::verify_factorization(f)) {
        if (json_format(opt))
            sink.stream() << nlohmann::json{{"ok", true}, {"matrix", cpfact::to_json(m)},
                                            {"terms", f.terms.size()}}
                                 .dump(2)
                          << "\n";
        else
            sink.stream() << "ok: " << f.terms.size() << " terms sum to "
                          << cpfact::to_text(m) << "\n";
        return kExitOk;
    }
    const cpfact::Int ra = cpfact::checked_sub(m.a, sum.a);
    const cpfact::Int rb = cpfact::checked_sub(m.b, sum.b);
    const cpfact::Int rc = cpfact::checked_sub(m.c, sum.c);
    if (json_format(opt))
        sink.stream() << nlohmann::json{{"ok", false},
                                        {"matrix", cpfact::to_json(m)},
                                        {"residual", {ra, rb, rc}}}
                             .dump(2)
                      << "\n";
    else
        sink.stream() << "mismatch: residual " << ra << ' ' << rb << ' ' << rc << "\n";
    return kExitVerify;
}

int cmd_minrank(const Options& opt) {
    Sink sink(opt.output);
    const cpfact::SymMat2 m = matrix_from_tokens(opt.matrix_tokens);
    require_dnn(m);
    if (opt.depth_cap < 1) throw cpfact::DomainError("depth cap must be positive");
    const cpfact::MinRankResult res = cpfact::min_cp_rank(m, opt.depth_cap);
    std::ostream& os = sink.stream();
    if (json_format(opt)) {
        os << cpfact::to_json(res).dump(2) << "\n";
        return kExitOk;
    }
    os << "matrix: " << cpfact::to_text(m) << "\n";
    if (res.status == cpfact::SearchStatus::Exact) {
        os << "min_terms: " << res.min_terms << " (exact)\n";
        os << "witness:";
        for (const cpfact::RankOneTerm& t : res.witness.terms) os << ' ' << t;
        os << "\n";
    } else {
        os << "status: depth-capped (no factorization within " << opt.depth_cap
           << " terms)\n";
    }
    os << "nodes_explored: " << res.nodes_explored << "\n";
    return kExitOk;
}

int cmd_fsq(const Options& opt) {
    Sink sink(opt.output);
    const cpfact::FourSquare fs = cpfact::four_square(opt.fsq_n);
    if (json_format(opt))
        sink.stream() << nlohmann::json{{"n", opt.fsq_n},
                                        {"squares", {fs.d1, fs.d2, fs.d3, fs.d4}}}
                             .dump(2)
                      << "\n";
    else
        sink.stream() << fs.d1 << ' ' << fs.d2 << ' ' << fs.d3 << ' ' << fs.d4 << "\n";
    return kExitOk;
}

int cmd_survey(const Options& opt) {
    Sink sink(opt.output);
    cpfact::SurveyOptions sopts;
    sopts.with_oracle = opt.with_oracle;
    sopts.depth_cap = opt.depth_cap;
    cpfact::run_survey_csv(opt.bound, sopts, sink.stream());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integer cp-factorization of symmetric 2x2 matrices"};
    app.require_subcommand(1);

    Options opt;

    const auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"text", "json", "structured"}));
        sub->add_option("--output", opt.output, "Write output to a file instead of stdout");
    };
    const auto add_matrix = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("matrix", opt.matrix_tokens,
                                  "Matrix as three integers: a b c");
        if (required) o->required();
    };

    CLI::App* factor = app.add_subcommand("factor", "Integer cp-factorization");
    add_matrix(factor, false);
    factor->add_option("--file", opt.file, "Batch mode: one matrix per line");
    factor->add_flag("--trace", opt.trace, "Print each peel and reduction step");
    add_format(factor);
    factor->callback([&] {
        if (opt.file.empty() && opt.matrix_tokens.empty())
            throw CLI::ValidationError("factor", "a matrix or --file is required");
    });

    CLI::App* verify = app.add_subcommand("verify", "Check a term list against a matrix");
    add_matrix(verify, true);
    verify->add_option("--terms", opt.terms_file, "File with one 'k t' term per line")
        ->required();
    add_format(verify);

    CLI::App* minrank = app.add_subcommand(
        "minrank", "Exhaustive minimal term count (exponential search; desk-scale inputs)");
    add_matrix(minrank, true);
    minrank->add_option("--depth-cap", opt.depth_cap, "Largest term count to try");
    add_format(minrank);

    CLI::App* fsq = app.add_subcommand("fsq", "Four-square decomposition");
    fsq->add_option("n", opt.fsq_n, "Nonnegative integer")->required();
    add_format(fsq);

    CLI::App* survey = app.add_subcommand("survey", "CSV sweep over all DNN matrices");
    survey->add_option("--bound", opt.bound, "Largest diagonal entry");
    survey->add_flag("--with-oracle", opt.with_oracle, "Also compute exact minima");
    survey->add_option("--depth-cap", opt.depth_cap, "Oracle depth cap");
    survey->add_option("--output", opt.output, "Write output to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (app.got_subcommand(factor)) return cmd_factor(opt);
        if (app.got_subcommand(verify)) return cmd_verify(opt);
        if (app.got_subcommand(minrank)) return cmd_minrank(opt);
        if (app.got_subcommand(fsq)) return cmd_fsq(opt);
        if (app.got_subcommand(survey)) return cmd_survey(opt);
    } catch (const cpfact::ParseError& e) {
        std::cerr << "parse error at token " << e.position() << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const cpfact::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
