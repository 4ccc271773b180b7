#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/envanalysis.hpp"
#include "hyperqif/hyper.hpp"

namespace hyperqif {

/// One credential row: the secret plus its demographic attributes.
struct CorpusRecord {
    std::string secret;
    std::map<std::string, std::string> attributes;
};

struct CorpusSchema {
    std::string secret_column;
    std::vector<std::string> attribute_columns;
};

enum class Delimiter { Auto, Comma, Tab };

struct IngestOptions {
    Delimiter delimiter = Delimiter::Auto;
    /// Malformed rows are skipped and counted; more than this many aborts
    /// the ingestion with TooManyMalformed.
    std::size_t max_bad_rows = std::numeric_limits<std::size_t>::max();
};

struct IngestResult {
    std::vector<CorpusRecord> records;
    std::size_t malformed_rows = 0;
};

/// Reads a delimited text file with a header row. A row is malformed when
/// its field count differs from the header's, its secret is empty, or a
/// schema attribute value is empty.
IngestResult ingest(const std::string& path, const CorpusSchema& schema,
                    const IngestOptions& options = {});
IngestResult ingest_stream(std::istream& in, const CorpusSchema& schema,
                           const IngestOptions& options = {});

/// Leftmost 4-digit substring in the range 1917..1995, if any.
std::optional<std::string> extract_year(std::string_view secret);
std::optional<std::string> extract_year(const CorpusRecord& record);

/// Stamps each record's extracted year into attributes[attribute_name];
/// records without a year are left untouched. Returns how many matched.
std::size_t annotate_years(std::vector<CorpusRecord>& records,
                           const std::string& attribute_name = "year");

/// Block label used for records that lack a value for the aggregated
/// attribute.
inline constexpr const char* kUnknownBlock = "unknown";

struct NamedAbstraction {
    std::string name;
    Hyper hyper;
    AggregationMatrix matrix;
};

/// The case-study environment: one deterministic strategy per record,
/// weighted uniformly, plus any attribute-level abstractions built from it.
///
/// The omniscient environment is held sparsely as (secret index, weight)
/// pairs; it only becomes a dense Hyper on request. Bayes environmental
/// vulnerability over point inners is 1 by construction, and a flag guards
/// that shortcut so the generic summation path stays reachable in tests.
class EnvironmentBundle {
public:
    static EnvironmentBundle build_omniscient(std::vector<CorpusRecord> records);

    const SecretSpace& space() const noexcept { return space_; }
    std::size_t record_count() const noexcept { return records_.size(); }
    const std::vector<CorpusRecord>& records() const noexcept { return records_; }

    /// Relative frequency of each distinct secret.
    Distribution prior() const;

    /// Dense materialization: one point inner per record. Quadratic in the
    /// corpus size; meant for desk-scale checks.
    Hyper omniscient() const;

    /// V_E of the omniscient environment, computed without materializing it.
    double omniscient_vulnerability(const VulnerabilityMeasure& measure) const;

    void set_bayes_shortcut(bool on) noexcept { bayes_shortcut_ = on; }
    bool bayes_shortcut() const noexcept { return bayes_shortcut_; }

    /// Aggregates record strategies into per-attribute-value blocks: block
    /// outer = block relative frequency, block inner = within-block secret
    /// frequency. Records lacking the attribute fall into the "unknown"
    /// block. The matrix maps record strategies to blocks
    /// deterministically.
    std::pair<Hyper, AggregationMatrix> abstract_by(const std::string& attribute) const;

    const NamedAbstraction& add_abstraction(const std::string& name,
                                            const std::string& attribute);
    const std::vector<NamedAbstraction>& abstractions() const noexcept {
        return abstractions_;
    }

private:
    EnvironmentBundle(SecretSpace space, std::vector<CorpusRecord> records,
                      std::vector<std::size_t> secret_index);

    SecretSpace space_;
    std::vector<CorpusRecord> records_;
    std::vector<std::size_t> secret_index_;  // per record
    double record_weight_ = 0.0;             // uniform 1/N
    bool bayes_shortcut_ = true;
    std::vector<NamedAbstraction> abstractions_;
};

struct DecompositionRow {
    std::string name;
    SecurityDecomposition decomposition;
};

/// One row per knowledge level: omniscient first, then the bundle's stored
/// abstractions in insertion order, then the prior-only model. The
/// perceived column is constant across rows.
struct DecompositionReport {
    std::string measure;
    std::vector<DecompositionRow> rows;
};

DecompositionReport decomposition_report(const EnvironmentBundle& bundle,
                                         const VulnerabilityMeasure& measure);

std::string render_decomposition_table(const DecompositionReport& report);

/// CSV of (abstraction, strategy, rank, probability) for the prior and
/// every stored abstraction, each strategy's support sorted by descending
/// probability.
std::string plot_data_csv(const EnvironmentBundle& bundle);

}  // namespace hyperqif
