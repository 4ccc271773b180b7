#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "hyperqif/corpus.hpp"

using namespace hyperqif;

namespace {

constexpr double kTol = 1e-9;
const VulnerabilityMeasure kBayes = VulnerabilityMeasure::bayes();

const CorpusSchema kSchema{"password", {"year", "gender"}};

std::vector<CorpusRecord> records_from(const std::string& csv) {
    std::istringstream in(csv);
    return ingest_stream(in, kSchema).records;
}

// A hand-sized corpus: two users per state-like block.
std::vector<CorpusRecord> six_users() {
    return {
        {"alpha", {{"state", "A"}}}, {"bravo", {{"state", "A"}}},
        {"alpha", {{"state", "B"}}}, {"delta", {{"state", "B"}}},
        {"echo", {{"state", "C"}}},  {"delta", {{"state", "C"}}},
    };
}

}  // namespace

TEST_CASE("ingest parses delimited text") {
    std::istringstream in("password,year,gender\naa1980,1980,f\nbb1990,1990,m\ncc1970,1970,f\n");
    const IngestResult result = ingest_stream(in, kSchema);
    CHECK(result.records.size() == 3);
    CHECK(result.malformed_rows == 0);
    CHECK(result.records[0].secret == "aa1980");
    CHECK(result.records[1].attributes.at("gender") == "m");
}

TEST_CASE("ingest counts malformed rows without failing") {
    std::istringstream in(
        "password,year,gender\n"
        "aa1980,1980,f\n"
        "bb1990,1990\n"       // missing field
        "cc1970,1970,\n"      // empty gender
        ",1960,m\n"           // empty secret
        "aa1980,1980,f\n");   // duplicate kept
    const IngestResult result = ingest_stream(in, kSchema);
    CHECK(result.records.size() == 2);
    CHECK(result.malformed_rows == 3);
}

TEST_CASE("ingest aborts past the malformed threshold") {
    std::istringstream in("password,year,gender\nbad,row\nbad,row\n");
    IngestOptions options;
    options.max_bad_rows = 1;
    CHECK_THROWS_AS(ingest_stream(in, kSchema, options), TooManyMalformed);
}

TEST_CASE("ingest validates the header") {
    std::istringstream in("password,year\naa,1980\n");
    CHECK_THROWS_AS(ingest_stream(in, kSchema), SchemaMismatch);
    std::istringstream empty("");
    CHECK_THROWS_AS(ingest_stream(empty, kSchema), SchemaMismatch);
    CHECK_THROWS_AS(ingest("/nonexistent/corpus.csv", kSchema), IoError);
}

TEST_CASE("ingest autodetects tabs") {
    std::istringstream in("password\tyear\tgender\naa1980\t1980\tf\n");
    const IngestResult result = ingest_stream(in, kSchema);
    CHECK(result.records.size() == 1);
    CHECK(result.records[0].attributes.at("year") == "1980");
}

TEST_CASE("extract_year finds the leftmost candidate") {
    CHECK(extract_year("patricia1983") == "1983");
    CHECK_FALSE(extract_year("dragon").has_value());
    CHECK(extract_year("19171995x") == "1917");
    CHECK(extract_year("x1995") == "1995");
    CHECK_FALSE(extract_year("1916").has_value());
    CHECK_FALSE(extract_year("1996").has_value());
    CHECK_FALSE(extract_year("198").has_value());
    CHECK(extract_year("11917") == "1917");

    // Brute-force scan agreement on a batch of awkward strings.
    const std::vector<std::string> cases = {"19851917", "a1917b1995", "00001950",
                                            "1917", "20171995", "9919955"};
    for (const std::string& s : cases) {
        std::optional<std::string> expected;
        for (std::size_t i = 0; i + 4 <= s.size() && !expected; ++i) {
            const std::string sub = s.substr(i, 4);
            if (sub.find_first_not_of("0123456789") == std::string::npos) {
                const int value = std::stoi(sub);
                if (value >= 1917 && value <= 1995) expected = sub;
            }
        }
        CHECK(extract_year(s) == expected);
    }
}

TEST_CASE("annotate_years stamps matching records") {
    std::vector<CorpusRecord> records = {{"aa1980", {}}, {"dragon", {}}};
    CHECK(annotate_years(records) == 1);
    CHECK(records[0].attributes.at("year") == "1980");
    CHECK(records[1].attributes.count("year") == 0);
}

TEST_CASE("build_omniscient worked examples") {
    EnvironmentBundle two = EnvironmentBundle::build_omniscient({{"a", {}}, {"b", {}}});
    const Hyper dense = two.omniscient();
    REQUIRE(dense.size() == 2);
    CHECK(dense.inner(0).probs() == Vec{1.0, 0.0});
    CHECK(dense.inner(1).probs() == Vec{0.0, 1.0});
    CHECK(dense.outer_prob(0) == doctest::Approx(0.5));

    EnvironmentBundle three = EnvironmentBundle::build_omniscient({{"a", {}}, {"a", {}}, {"b", {}}});
    CHECK(three.omniscient().size() == 3);
    const Distribution prior = three.prior();
    CHECK(prior[0] == doctest::Approx(2.0 / 3.0).epsilon(kTol));
    CHECK(prior[1] == doctest::Approx(1.0 / 3.0).epsilon(kTol));

    CHECK(three.omniscient_vulnerability(kBayes) == 1.0);

    CHECK_THROWS_AS(EnvironmentBundle::build_omniscient({}), EmptyCorpus);
}

TEST_CASE("omniscient vulnerability shortcut agrees with the generic path") {
    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(six_users());
    CHECK(bundle.omniscient_vulnerability(kBayes) == 1.0);
    bundle.set_bayes_shortcut(false);
    CHECK(bundle.omniscient_vulnerability(kBayes) == doctest::Approx(1.0).epsilon(kTol));

    // Against the dense hyper for a non-trivial gain.
    Mat gain = {{2.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.5, 0.25}};
    const GainFunction g({"w1", "w2"}, bundle.space(), gain);
    CHECK(bundle.omniscient_vulnerability(VulnerabilityMeasure::g_based(g)) ==
          doctest::Approx(hyper_vulnerability(VulnerabilityMeasure::g_based(g),
                                              bundle.omniscient()))
              .epsilon(kTol));
}

TEST_CASE("abstract_by groups records into blocks") {
    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(six_users());
    const auto [hyper, matrix] = bundle.abstract_by("state");

    REQUIRE(hyper.size() == 3);
    CHECK(matrix.input_space().size() == 6);
    CHECK(matrix.output_space().labels() == std::vector<std::string>{"A", "B", "C"});
    CHECK(matrix.is_deterministic());
    CHECK(hyper.outer_prob(0) == doctest::Approx(1.0 / 3.0).epsilon(kTol));
    // Block A holds alpha and bravo at equal weight.
    CHECK(hyper.inner(0)[bundle.space().index_of("alpha")] == doctest::Approx(0.5));
    CHECK(hyper.inner(0)[bundle.space().index_of("bravo")] == doctest::Approx(0.5));

    // The stored matrix reproduces the hyper through generic aggregation.
    {
        const Hyper via_matrix = apply_aggregation(bundle.omniscient(), matrix);
        REQUIRE(via_matrix.size() == hyper.size());
        for (std::size_t j = 0; j < hyper.size(); ++j) {
            CHECK(via_matrix.outer_prob(j) == doctest::Approx(hyper.outer_prob(j)).epsilon(kTol));
            for (std::size_t x = 0; x < bundle.space().size(); ++x) {
                CHECK(via_matrix.inner(j)[x] == doctest::Approx(hyper.inner(j)[x]).epsilon(kTol));
            }
        }
    }

    CHECK_THROWS_AS(bundle.abstract_by("shoe_size"), UnknownAttribute);
}

TEST_CASE("abstract_by degenerate attributes") {
    auto records = six_users();
    for (auto& r : records) r.attributes["fixed"] = "same";
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].attributes["id"] = std::to_string(i);
    }
    records[5].attributes.erase("fixed");

    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(records);

    // A constant attribute yields the point hyper on the prior, except the
    // one record lacking it lands in "unknown".
    const auto [by_fixed, fixed_matrix] = bundle.abstract_by("fixed");
    CHECK(by_fixed.size() == 2);
    CHECK(fixed_matrix.output_space().labels() ==
          std::vector<std::string>{"same", kUnknownBlock});

    // A unique attribute reproduces the omniscient environment.
    const auto [by_id, id_matrix] = bundle.abstract_by("id");
    CHECK(by_id.size() == 6);
    CHECK(environmental_vulnerability(kBayes, by_id) == doctest::Approx(1.0).epsilon(kTol));

    auto all_fixed = six_users();
    for (auto& r : all_fixed) r.attributes["fixed"] = "same";
    EnvironmentBundle constant = EnvironmentBundle::build_omniscient(all_fixed);
    const auto [point, point_matrix] = constant.abstract_by("fixed");
    CHECK(point.size() == 1);
    const Distribution prior = constant.prior();
    for (std::size_t x = 0; x < prior.size(); ++x) {
        CHECK(point.inner(0)[x] == doctest::Approx(prior[x]).epsilon(kTol));
    }
}

TEST_CASE("reduce merges duplicate record strategies harmlessly") {
    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(six_users());
    const Hyper dense = bundle.omniscient();
    const Hyper merged = reduce(dense);
    CHECK(merged.size() == 4);  // alpha and delta appear twice
    CHECK(hyper_vulnerability(kBayes, merged) ==
          doctest::Approx(hyper_vulnerability(kBayes, dense)).epsilon(kTol));
    const Distribution before = prior_of(dense);
    const Distribution after = prior_of(merged);
    for (std::size_t x = 0; x < before.size(); ++x) {
        CHECK(after[x] == doctest::Approx(before[x]).epsilon(kTol));
    }
}

TEST_CASE("decomposition report on a hand corpus") {
    auto records = six_users();
    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(records);
    bundle.add_abstraction("state", "state");

    const DecompositionReport report = decomposition_report(bundle, kBayes);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].name == "omniscient");
    CHECK(report.rows[1].name == "state");
    CHECK(report.rows[2].name == "prior");

    const double perceived = kBayes(bundle.prior());
    for (const DecompositionRow& row : report.rows) {
        const SecurityDecomposition& d = row.decomposition;
        CHECK(d.perceived == doctest::Approx(perceived).epsilon(kTol));
        CHECK(d.perceived == doctest::Approx(d.by_aggregation * d.by_strategy).epsilon(kTol));
    }
    CHECK(report.rows[0].decomposition.by_strategy == 1.0);
    CHECK(report.rows[2].decomposition.by_aggregation == doctest::Approx(1.0));

    // Monotone chain: prior <= state block <= omniscient.
    CHECK(report.rows[2].decomposition.by_strategy <=
          report.rows[1].decomposition.by_strategy + kTol);
    CHECK(report.rows[1].decomposition.by_strategy <=
          report.rows[0].decomposition.by_strategy + kTol);

    const std::string table = render_decomposition_table(report);
    CHECK(table.find("omniscient") != std::string::npos);
    CHECK(table.find("V_E") != std::string::npos);
}

TEST_CASE("plot data lists strategies by rank") {
    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(six_users());
    bundle.add_abstraction("state", "state");
    const std::string csv = plot_data_csv(bundle);
    CHECK(csv.rfind("abstraction,strategy,rank,probability\n", 0) == 0);
    CHECK(csv.find("prior,prior,1,") != std::string::npos);
    CHECK(csv.find("state,A,1,0.5") != std::string::npos);
}

TEST_CASE("the committed synthetic corpus matches its counting oracle") {
    const std::string path = std::string(HYPERQIF_TEST_DATA_DIR) + "/synthetic_corpus.csv";
    const IngestResult ingested = ingest(path, kSchema);
    REQUIRE(ingested.records.size() == 2000);
    CHECK(ingested.malformed_rows == 0);

    // Counting oracle: exact frequencies straight off the records.
    std::map<std::string, int> password_counts;
    std::map<std::string, std::map<std::string, int>> by_gender, by_year;
    for (const CorpusRecord& r : ingested.records) {
        ++password_counts[r.secret];
        ++by_gender[r.attributes.at("gender")][r.secret];
        ++by_year[r.attributes.at("year")][r.secret];
    }
    auto block_max_sum = [](const std::map<std::string, std::map<std::string, int>>& blocks) {
        int total = 0;
        for (const auto& [_, counts] : blocks) {
            int best = 0;
            for (const auto& [__, c] : counts) best = std::max(best, c);
            total += best;
        }
        return total;
    };
    int top = 0;
    for (const auto& [_, c] : password_counts) top = std::max(top, c);
    const double oracle_prior = top / 2000.0;
    const double oracle_gender = block_max_sum(by_gender) / 2000.0;
    const double oracle_year = block_max_sum(by_year) / 2000.0;

    EnvironmentBundle bundle = EnvironmentBundle::build_omniscient(ingested.records);
    bundle.add_abstraction("year", "year");
    bundle.add_abstraction("gender", "gender");

    CHECK(kBayes(bundle.prior()) == doctest::Approx(oracle_prior).epsilon(1e-12));
    CHECK(environmental_vulnerability(kBayes, bundle.abstractions()[0].hyper) ==
          doctest::Approx(oracle_year).epsilon(1e-12));
    CHECK(environmental_vulnerability(kBayes, bundle.abstractions()[1].hyper) ==
          doctest::Approx(oracle_gender).epsilon(1e-12));

    // Every password embeds the year column's value, so the derived
    // attribute reproduces the same abstraction.
    std::vector<CorpusRecord> derived = ingested.records;
    for (CorpusRecord& r : derived) r.attributes.erase("year");
    CHECK(annotate_years(derived) == 2000);
    for (std::size_t i = 0; i < derived.size(); ++i) {
        CHECK(derived[i].attributes.at("year") == ingested.records[i].attributes.at("year"));
    }
}
