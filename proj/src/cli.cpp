#include "hyperqif/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/corpus.hpp"
#include "hyperqif/envanalysis.hpp"
#include "hyperqif/json_io.hpp"
#include "hyperqif/selftest.hpp"
#include "format.hpp"

namespace hyperqif {

namespace {

struct MeasureOptions {
    std::string measure = "bayes";
    std::string gain_path;
};

void add_measure_options(CLI::App* cmd, MeasureOptions& opts) {
    cmd->add_option("--measure", opts.measure, "Vulnerability measure: bayes, identity or g")
        ->default_val("bayes")
        ->check(CLI::IsMember({"bayes", "identity", "g"}));
    cmd->add_option("--gain", opts.gain_path, "Gain function JSON (required iff --measure g)");
}

VulnerabilityMeasure resolve_measure(const MeasureOptions& opts, const SecretSpace& space) {
    if (opts.measure == "g") {
        if (opts.gain_path.empty()) {
            throw Error("--measure g requires --gain FILE");
        }
        return VulnerabilityMeasure::g_based(io::gain_from_json(io::load_json(opts.gain_path)), "g");
    }
    if (!opts.gain_path.empty()) {
        throw Error("--gain is only meaningful with --measure g");
    }
    if (opts.measure == "identity") {
        return VulnerabilityMeasure::g_based(GainFunction::identity(space), "identity");
    }
    return VulnerabilityMeasure::bayes();
}

void emit_value(std::ostream& out, const std::string& output, const std::string& measure,
                double value) {
    if (output == "json") {
        io::json doc{{"schema", io::kSchemaTag}, {"measure", measure}, {"value", value}};
        out << doc.dump(2) << "\n";
    } else {
        out << format_number(value) << "\n";
    }
}

void emit_decomposition(std::ostream& out, const std::string& output,
                        const std::string& measure, const SecurityDecomposition& d) {
    if (output == "json") {
        out << io::to_json(d, measure).dump(2) << "\n";
        return;
    }
    out << "measure              " << measure << "\n"
        << "perceived            " << format_number(d.perceived) << "\n"
        << "by_aggregation       " << format_number(d.by_aggregation) << "\n"
        << "by_strategy          " << format_number(d.by_strategy) << "\n"
        << "perceived_bits       " << format_number(d.perceived_bits) << "\n"
        << "by_aggregation_bits  " << format_number(d.by_aggregation_bits) << "\n"
        << "by_strategy_bits     " << format_number(d.by_strategy_bits) << "\n";
}

void emit_document(std::ostream& out, const std::string& out_path, const io::json& doc) {
    if (out_path.empty()) {
        out << doc.dump(2) << "\n";
    } else {
        io::save_json(out_path, doc);
    }
}

struct CorpusOptions {
    std::string input;
    std::string secret_column = "password";
    std::vector<std::string> attribute_columns;
    std::string delimiter = "auto";
    std::size_t max_bad_rows = std::numeric_limits<std::size_t>::max();
    std::string derive_year;
    bool require_year = false;
    std::string plot_data_path;
    MeasureOptions measure;
    std::string output = "table";
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts) {
    cmd->add_option("--input", opts.input, "Delimited corpus file with a header row")
        ->required();
    cmd->add_option("--secret-col", opts.secret_column, "Column holding the secret")
        ->default_val("password");
    cmd->add_option("--attr-cols", opts.attribute_columns,
                    "Comma-separated attribute columns to aggregate by")
        ->delimiter(',');
    cmd->add_option("--delimiter", opts.delimiter, "Field delimiter")
        ->default_val("auto")
        ->check(CLI::IsMember({"auto", "comma", "tab"}));
    cmd->add_option("--max-bad-rows", opts.max_bad_rows,
                    "Abort when more than this many rows are malformed");
    cmd->add_option("--derive-year", opts.derive_year,
                    "Derive this attribute from the leftmost 1917..1995 substring of the secret");
    cmd->add_flag("--require-year", opts.require_year,
                  "Drop records whose secret contains no 1917..1995 substring");
    cmd->add_option("--plot-data", opts.plot_data_path,
                    "Write rank/probability CSV for every strategy to this file");
    add_measure_options(cmd, opts.measure);
    cmd->add_option("--output", opts.output, "Output format")
        ->default_val("table")
        ->check(CLI::IsMember({"table", "json"}));
}

int run_corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err) {
    CorpusSchema schema{opts.secret_column, opts.attribute_columns};
    if (!opts.derive_year.empty()) {
        // The derived column comes from the secret itself, not the file.
        std::erase(schema.attribute_columns, opts.derive_year);
    }

    IngestOptions ingest_options;
    ingest_options.max_bad_rows = opts.max_bad_rows;
    if (opts.delimiter == "comma") ingest_options.delimiter = Delimiter::Comma;
    if (opts.delimiter == "tab") ingest_options.delimiter = Delimiter::Tab;

    IngestResult ingested = ingest(opts.input, schema, ingest_options);
    if (ingested.malformed_rows > 0) {
        err << "warning: skipped " << ingested.malformed_rows << " malformed rows\n";
    }

    if (!opts.derive_year.empty()) {
        annotate_years(ingested.records, opts.derive_year);
    }
    if (opts.require_year) {
        std::erase_if(ingested.records, [](const CorpusRecord& record) {
            return !extract_year(record.secret).has_value();
        });
    }

    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(std::move(ingested.records));
    for (const std::string& attribute : opts.attribute_columns) {
        bundle.add_abstraction(attribute, attribute);
    }
    if (!opts.derive_year.empty() &&
        std::find(opts.attribute_columns.begin(), opts.attribute_columns.end(),
                  opts.derive_year) == opts.attribute_columns.end()) {
        bundle.add_abstraction(opts.derive_year, opts.derive_year);
    }

    const VulnerabilityMeasure measure = resolve_measure(opts.measure, bundle.space());
    const DecompositionReport report = decomposition_report(bundle, measure);

    if (!opts.plot_data_path.empty()) {
        std::ofstream plot(opts.plot_data_path);
        if (!plot) throw IoError("cannot write \"" + opts.plot_data_path + "\"");
        plot << plot_data_csv(bundle);
    }

    if (opts.output == "json") {
        io::json doc = io::to_json(report);
        doc["malformed_rows"] = ingested.malformed_rows;
        doc["records"] = bundle.record_count();
        out << doc.dump(2) << "\n";
    } else {
        out << render_decomposition_table(report);
    }
    return 0;
}

std::uint64_t selftest_seed_from_env() {
    if (const char* env = std::getenv("HYPERQIF_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return selftest::kDefaultSeed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vulnerability of secrets generated under a plurality of strategies"};
    app.name("hyperqif");
    app.require_subcommand(1);

    std::string output = "text";
    auto add_output = [&output](CLI::App* cmd) {
        cmd->add_option("--output", output, "Output format")
            ->default_val("text")
            ->check(CLI::IsMember({"text", "json"}));
    };

    // vuln
    std::string dist_path;
    MeasureOptions vuln_measure;
    CLI::App* vuln = app.add_subcommand("vuln", "Prior vulnerability of a distribution");
    vuln->add_option("--dist", dist_path, "Distribution JSON")->required();
    add_measure_options(vuln, vuln_measure);
    add_output(vuln);

    // env-vuln / strat-vuln / decompose
    std::string env_path;
    MeasureOptions env_measure;
    CLI::App* env_vuln = app.add_subcommand("env-vuln", "Environmental vulnerability of an environment");
    env_vuln->add_option("--env", env_path, "Environment (hyper) JSON")->required();
    add_measure_options(env_vuln, env_measure);
    add_output(env_vuln);

    CLI::App* strat_vuln = app.add_subcommand("strat-vuln", "Strategy vulnerability of an environment");
    strat_vuln->add_option("--env", env_path, "Environment (hyper) JSON")->required();
    add_measure_options(strat_vuln, env_measure);
    add_output(strat_vuln);

    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "Perceived-security decomposition of an environment");
    decompose_cmd->add_option("--env", env_path, "Environment (hyper) JSON")->required();
    add_measure_options(decompose_cmd, env_measure);
    add_output(decompose_cmd);

    // abstract
    std::string abstract_env_path, matrix_path, out_path;
    CLI::App* abstract_cmd =
        app.add_subcommand("abstract", "Apply an aggregation matrix to an environment");
    abstract_cmd->add_option("--env", abstract_env_path, "Environment (hyper) JSON")->required();
    abstract_cmd->add_option("--matrix", matrix_path, "Aggregation matrix JSON")->required();
    abstract_cmd->add_option("--out", out_path, "Write the abstraction here instead of stdout");

    // check-refines
    std::string concrete_path, abstract_path, witness_path;
    double tolerance = kFeasibilityTolerance;
    CLI::App* check_cmd =
        app.add_subcommand("check-refines", "Decide whether one hyper abstracts another");
    check_cmd->add_option("--concrete", concrete_path, "Concrete hyper JSON")->required();
    check_cmd->add_option("--abstract", abstract_path, "Candidate abstraction JSON")->required();
    check_cmd->add_option("--emit-witness", witness_path, "Write a witness aggregation matrix here");
    check_cmd->add_option("--tolerance", tolerance, "Feasibility tolerance")
        ->default_val(kFeasibilityTolerance);
    add_output(check_cmd);

    // collapse
    std::string higher_path;
    CLI::App* collapse_cmd =
        app.add_subcommand("collapse", "Collapse a higher-order hyper to an ordinary hyper");
    collapse_cmd->add_option("--higher", higher_path, "Higher-order hyper JSON")->required();
    collapse_cmd->add_option("--out", out_path, "Write the collapsed hyper here instead of stdout");

    // corpus analyze (plus flat alias)
    CorpusOptions corpus_opts;
    CLI::App* corpus_cmd = app.add_subcommand("corpus", "Corpus case-study pipeline");
    corpus_cmd->require_subcommand(1);
    CLI::App* corpus_analyze =
        corpus_cmd->add_subcommand("analyze", "Decomposition report for a credential corpus");
    add_corpus_options(corpus_analyze, corpus_opts);
    CorpusOptions corpus_alias_opts;
    CLI::App* corpus_alias = app.add_subcommand("corpus-analyze", "Alias of `corpus analyze`");
    add_corpus_options(corpus_alias, corpus_alias_opts);

    // selftest (hidden)
    std::size_t instances = 200;
    std::uint64_t seed = 0;
    bool seed_given = false;
    CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the seeded property-test corpora");
    selftest_cmd->group("");
    selftest_cmd->add_option("--instances", instances, "Instances per suite")->default_val(200);
    selftest_cmd->add_option("--seed", seed, "Override the property-corpus seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });

    std::vector<const char*> argv;
    argv.push_back("hyperqif");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(vuln)) {
            const Distribution dist = io::distribution_from_json(io::load_json(dist_path));
            const VulnerabilityMeasure measure = resolve_measure(vuln_measure, dist.space());
            emit_value(out, output, measure.name(), measure.prior_vulnerability(dist));
            return 0;
        }
        if (app.got_subcommand(env_vuln)) {
            const Hyper env = io::hyper_from_json(io::load_json(env_path));
            const VulnerabilityMeasure measure = resolve_measure(env_measure, env.space());
            emit_value(out, output, measure.name(), environmental_vulnerability(measure, env));
            return 0;
        }
        if (app.got_subcommand(strat_vuln)) {
            const Hyper env = io::hyper_from_json(io::load_json(env_path));
            const VulnerabilityMeasure measure = resolve_measure(env_measure, env.space());
            emit_value(out, output, measure.name(), strategy_vulnerability(measure, env));
            return 0;
        }
        if (app.got_subcommand(decompose_cmd)) {
            const Hyper env = io::hyper_from_json(io::load_json(env_path));
            const VulnerabilityMeasure measure = resolve_measure(env_measure, env.space());
            emit_decomposition(out, output, measure.name(), decompose_security(measure, env));
            return 0;
        }
        if (app.got_subcommand(abstract_cmd)) {
            const Hyper env = io::hyper_from_json(io::load_json(abstract_env_path));
            const AggregationMatrix matrix = io::channel_from_json(io::load_json(matrix_path));
            emit_document(out, out_path, io::to_json(apply_aggregation(env, matrix)));
            return 0;
        }
        if (app.got_subcommand(check_cmd)) {
            const Hyper concrete = io::hyper_from_json(io::load_json(concrete_path));
            const Hyper abstracted = io::hyper_from_json(io::load_json(abstract_path));
            const RefinementWitness witness = check_abstracts(abstracted, concrete, tolerance);
            if (output == "json") {
                out << io::to_json(witness).dump(2) << "\n";
            } else {
                out << "holds " << (witness.holds ? "true" : "false") << "\n"
                    << "residual " << format_number(witness.residual) << "\n";
            }
            if (!witness_path.empty() && witness.matrix) {
                io::save_json(witness_path, io::to_json(*witness.matrix));
            }
            return witness.holds ? 0 : 1;
        }
        if (app.got_subcommand(collapse_cmd)) {
            const HigherHyper higher = io::higher_hyper_from_json(io::load_json(higher_path));
            emit_document(out, out_path, io::to_json(collapse(higher)));
            return 0;
        }
        if (app.got_subcommand(corpus_cmd)) {
            return run_corpus(corpus_opts, out, err);
        }
        if (app.got_subcommand(corpus_alias)) {
            return run_corpus(corpus_alias_opts, out, err);
        }
        if (app.got_subcommand(selftest_cmd)) {
            selftest::Options options;
            options.instances = instances;
            options.seed = seed_given ? seed : selftest_seed_from_env();
            bool all_passed = true;
            for (const selftest::SuiteResult& suite : selftest::run_property_suites(options)) {
                out << (suite.passed() ? "[ok]   " : "[FAIL] ") << suite.name << " ("
                    << suite.instances << " instances";
                if (!suite.passed()) out << ", " << suite.note;
                out << ")\n";
                all_passed = all_passed && suite.passed();
            }
            return all_passed ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace hyperqif
