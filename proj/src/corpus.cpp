#include "hyperqif/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "format.hpp"

namespace hyperqif {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

IngestResult ingest_stream(std::istream& in, const CorpusSchema& schema,
                           const IngestOptions& options) {
    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw SchemaMismatch("corpus: missing header row");
    }
    strip_cr(header_line);

    char delimiter = ',';
    switch (options.delimiter) {
        case Delimiter::Comma: delimiter = ','; break;
        case Delimiter::Tab: delimiter = '\t'; break;
        case Delimiter::Auto:
            delimiter = header_line.find('\t') != std::string::npos ? '\t' : ',';
            break;
    }

    const std::vector<std::string> header = split_fields(header_line, delimiter);
    std::unordered_map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) column_index.emplace(header[i], i);

    auto require_column = [&](const std::string& name) {
        auto it = column_index.find(name);
        if (it == column_index.end()) {
            throw SchemaMismatch("corpus: header lacks column \"" + name + "\"");
        }
        return it->second;
    };

    const std::size_t secret_col = require_column(schema.secret_column);
    std::vector<std::pair<std::string, std::size_t>> attr_cols;
    for (const std::string& attr : schema.attribute_columns) {
        attr_cols.emplace_back(attr, require_column(attr));
    }

    IngestResult result;
    std::string line;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line, delimiter);

        bool malformed = fields.size() != header.size() || fields[secret_col].empty();
        if (!malformed) {
            for (const auto& [name, col] : attr_cols) {
                if (fields[col].empty()) {
                    malformed = true;
                    break;
                }
            }
        }
        if (malformed) {
            ++result.malformed_rows;
            if (result.malformed_rows > options.max_bad_rows) {
                std::ostringstream msg;
                msg << "corpus: more than " << options.max_bad_rows << " malformed rows";
                throw TooManyMalformed(msg.str());
            }
            continue;
        }

        CorpusRecord record;
        record.secret = fields[secret_col];
        for (const auto& [name, col] : attr_cols) {
            record.attributes.emplace(name, fields[col]);
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

IngestResult ingest(const std::string& path, const CorpusSchema& schema,
                    const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("corpus: cannot open \"" + path + "\"");
    return ingest_stream(in, schema, options);
}

std::optional<std::string> extract_year(std::string_view secret) {
    if (secret.size() < 4) return std::nullopt;
    for (std::size_t i = 0; i + 4 <= secret.size(); ++i) {
        bool digits = true;
        int value = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const unsigned char ch = static_cast<unsigned char>(secret[i + k]);
            if (!std::isdigit(ch)) {
                digits = false;
                break;
            }
            value = value * 10 + (ch - '0');
        }
        if (digits && value >= 1917 && value <= 1995) {
            return std::string(secret.substr(i, 4));
        }
    }
    return std::nullopt;
}

std::optional<std::string> extract_year(const CorpusRecord& record) {
    return extract_year(record.secret);
}

std::size_t annotate_years(std::vector<CorpusRecord>& records,
                           const std::string& attribute_name) {
    std::size_t matched = 0;
    for (CorpusRecord& record : records) {
        if (auto year = extract_year(record.secret)) {
            record.attributes[attribute_name] = *year;
            ++matched;
        }
    }
    return matched;
}

EnvironmentBundle::EnvironmentBundle(SecretSpace space, std::vector<CorpusRecord> records,
                                     std::vector<std::size_t> secret_index)
    : space_(std::move(space)), records_(std::move(records)),
      secret_index_(std::move(secret_index)),
      record_weight_(1.0 / static_cast<double>(records_.size())) {}

EnvironmentBundle EnvironmentBundle::build_omniscient(std::vector<CorpusRecord> records) {
    if (records.empty()) throw EmptyCorpus("corpus: no records");

    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<std::size_t> secret_index;
    secret_index.reserve(records.size());
    for (const CorpusRecord& record : records) {
        auto [it, inserted] = seen.emplace(record.secret, labels.size());
        if (inserted) labels.push_back(record.secret);
        secret_index.push_back(it->second);
    }
    return EnvironmentBundle(SecretSpace(std::move(labels)), std::move(records),
                             std::move(secret_index));
}

Distribution EnvironmentBundle::prior() const {
    Vec probs(space_.size(), 0.0);
    for (std::size_t index : secret_index_) probs[index] += record_weight_;
    return Distribution(space_, std::move(probs));
}

Hyper EnvironmentBundle::omniscient() const {
    std::vector<Distribution> inners;
    inners.reserve(records_.size());
    for (std::size_t index : secret_index_) {
        Vec point(space_.size(), 0.0);
        point[index] = 1.0;
        inners.emplace_back(space_, std::move(point));
    }
    return Hyper(space_, std::move(inners), Vec(records_.size(), record_weight_));
}

double EnvironmentBundle::omniscient_vulnerability(const VulnerabilityMeasure& measure) const {
    if (measure.is_bayes() && bayes_shortcut_) {
        // Every inner is a point mass, so each contributes its full weight.
        return 1.0;
    }
    const GainFunction gain = measure.as_gain(space_);
    Vec column_max(space_.size(), 0.0);
    for (std::size_t x = 0; x < space_.size(); ++x) {
        double best = gain.at(0, x);
        for (std::size_t w = 1; w < gain.guess_count(); ++w) {
            best = std::max(best, gain.at(w, x));
        }
        column_max[x] = best;
    }
    double total = 0.0;
    for (std::size_t index : secret_index_) total += record_weight_ * column_max[index];
    return total;
}

std::pair<Hyper, AggregationMatrix> EnvironmentBundle::abstract_by(
    const std::string& attribute) const {
    bool attribute_seen = false;
    for (const CorpusRecord& record : records_) {
        if (record.attributes.count(attribute)) {
            attribute_seen = true;
            break;
        }
    }
    if (!attribute_seen) {
        throw UnknownAttribute("corpus: no record carries attribute \"" + attribute + "\"");
    }

    std::vector<std::string> block_labels;
    std::unordered_map<std::string, std::size_t> block_of;
    std::vector<std::size_t> record_block(records_.size());
    for (std::size_t r = 0; r < records_.size(); ++r) {
        auto it = records_[r].attributes.find(attribute);
        const std::string key =
            it == records_[r].attributes.end() ? std::string(kUnknownBlock) : it->second;
        auto [entry, inserted] = block_of.emplace(key, block_labels.size());
        if (inserted) block_labels.push_back(key);
        record_block[r] = entry->second;
    }

    const std::size_t n_blocks = block_labels.size();
    Vec block_weight(n_blocks, 0.0);
    Mat block_counts(n_blocks, Vec(space_.size(), 0.0));
    for (std::size_t r = 0; r < records_.size(); ++r) {
        block_weight[record_block[r]] += record_weight_;
        block_counts[record_block[r]][secret_index_[r]] += record_weight_;
    }

    std::vector<Distribution> inners;
    inners.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        Vec inner = block_counts[b];
        for (double& v : inner) v /= block_weight[b];
        inners.emplace_back(space_, std::move(inner));
    }
    Hyper hyper(space_, std::move(inners), block_weight);

    std::vector<std::string> record_labels;
    record_labels.reserve(records_.size());
    for (std::size_t r = 0; r < records_.size(); ++r) {
        record_labels.push_back(std::to_string(r));
    }
    Mat matrix(records_.size(), Vec(n_blocks, 0.0));
    for (std::size_t r = 0; r < records_.size(); ++r) {
        matrix[r][record_block[r]] = 1.0;
    }
    AggregationMatrix aggregation(SecretSpace(std::move(record_labels)),
                                  SecretSpace(block_labels), std::move(matrix));
    return {std::move(hyper), std::move(aggregation)};
}

const NamedAbstraction& EnvironmentBundle::add_abstraction(const std::string& name,
                                                           const std::string& attribute) {
    auto [hyper, matrix] = abstract_by(attribute);
    abstractions_.push_back(NamedAbstraction{name, std::move(hyper), std::move(matrix)});
    return abstractions_.back();
}

namespace {

SecurityDecomposition make_decomposition(double perceived, double env_vulnerability) {
    if (!(env_vulnerability > 0.0)) {
        throw ZeroEnvironmentalVulnerability(
            "corpus: environmental vulnerability is not positive");
    }
    SecurityDecomposition d;
    d.perceived = perceived;
    d.by_strategy = env_vulnerability;
    d.by_aggregation = perceived / env_vulnerability;
    d.perceived_bits = min_entropy_bits(d.perceived);
    d.by_aggregation_bits = min_entropy_bits(d.by_aggregation);
    d.by_strategy_bits = min_entropy_bits(d.by_strategy);
    return d;
}

}  // namespace

DecompositionReport decomposition_report(const EnvironmentBundle& bundle,
                                         const VulnerabilityMeasure& measure) {
    DecompositionReport report;
    report.measure = measure.name();

    const Distribution prior = bundle.prior();
    const double perceived = measure.prior_vulnerability(prior);

    report.rows.push_back(DecompositionRow{
        "omniscient",
        make_decomposition(perceived, bundle.omniscient_vulnerability(measure))});
    for (const NamedAbstraction& abstraction : bundle.abstractions()) {
        report.rows.push_back(
            DecompositionRow{abstraction.name, decompose_security(measure, abstraction.hyper)});
    }
    report.rows.push_back(
        DecompositionRow{"prior", decompose_security(measure, point_hyper(prior))});
    return report;
}

std::string render_decomposition_table(const DecompositionReport& report) {
    std::vector<std::array<std::string, 7>> cells;
    cells.push_back({"abstraction", "V(prior)", "V_E", "V_S", "bits(V)", "bits(V_E)", "bits(V_S)"});
    for (const DecompositionRow& row : report.rows) {
        const SecurityDecomposition& d = row.decomposition;
        cells.push_back({row.name, format_number(d.perceived), format_number(d.by_strategy),
                         format_number(d.by_aggregation), format_number(d.perceived_bits),
                         format_number(d.by_strategy_bits),
                         format_number(d.by_aggregation_bits)});
    }

    std::array<std::size_t, 7> widths{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::ostringstream out;
    out << "measure: " << report.measure << "\n";
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(widths[c] + 2)) << row[c];
        }
        out << "\n";
    }
    return out.str();
}

namespace {

void emit_strategy_rows(std::ostream& out, const std::string& abstraction,
                        const std::string& strategy, const Distribution& dist) {
    std::vector<double> probs;
    for (double v : dist.probs()) {
        if (v > 0.0) probs.push_back(v);
    }
    std::sort(probs.begin(), probs.end(), std::greater<>());
    for (std::size_t rank = 0; rank < probs.size(); ++rank) {
        out << abstraction << ',' << strategy << ',' << (rank + 1) << ','
            << format_number(probs[rank]) << "\n";
    }
}

}  // namespace

std::string plot_data_csv(const EnvironmentBundle& bundle) {
    std::ostringstream out;
    out << "abstraction,strategy,rank,probability\n";
    emit_strategy_rows(out, "prior", "prior", bundle.prior());
    for (const NamedAbstraction& abstraction : bundle.abstractions()) {
        const SecretSpace& blocks = abstraction.matrix.output_space();
        for (std::size_t b = 0; b < abstraction.hyper.size(); ++b) {
            emit_strategy_rows(out, abstraction.name, blocks.label(b),
                               abstraction.hyper.inner(b));
        }
    }
    return out.str();
}

}  // namespace hyperqif
