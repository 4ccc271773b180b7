#include "hyperqif/json_io.hpp"

#include <fstream>
#include <utility>

namespace hyperqif::io {

namespace {

void check_schema(const json& doc, const char* what) {
    if (!doc.is_object()) {
        throw InvalidFormat(std::string(what) + ": expected a JSON object");
    }
    auto it = doc.find("schema");
    if (it != doc.end() && *it != kSchemaTag) {
        throw InvalidFormat(std::string(what) + ": unsupported schema \"" +
                            it->dump() + "\"");
    }
}

const json& require(const json& doc, const char* key, const char* what) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw InvalidFormat(std::string(what) + ": missing key \"" + key + "\"");
    }
    return *it;
}

std::vector<std::string> to_labels(const json& node, const char* what) {
    if (!node.is_array() || node.empty()) {
        throw InvalidFormat(std::string(what) + ": expected a non-empty array of labels");
    }
    std::vector<std::string> labels;
    labels.reserve(node.size());
    for (const json& item : node) {
        if (!item.is_string()) {
            throw InvalidFormat(std::string(what) + ": labels must be strings");
        }
        labels.push_back(item.get<std::string>());
    }
    return labels;
}

Vec to_vec(const json& node, const char* what) {
    if (!node.is_array()) {
        throw InvalidFormat(std::string(what) + ": expected an array of numbers");
    }
    Vec values;
    values.reserve(node.size());
    for (const json& item : node) {
        if (!item.is_number()) {
            throw InvalidFormat(std::string(what) + ": entries must be numbers");
        }
        values.push_back(item.get<double>());
    }
    return values;
}

Mat to_mat(const json& node, const char* what) {
    if (!node.is_array()) {
        throw InvalidFormat(std::string(what) + ": expected an array of rows");
    }
    Mat rows;
    rows.reserve(node.size());
    for (const json& row : node) rows.push_back(to_vec(row, what));
    return rows;
}

json decomposition_body(const SecurityDecomposition& d) {
    return json{
        {"perceived", d.perceived},
        {"by_aggregation", d.by_aggregation},
        {"by_strategy", d.by_strategy},
        {"bits",
         {{"perceived", d.perceived_bits},
          {"by_aggregation", d.by_aggregation_bits},
          {"by_strategy", d.by_strategy_bits}}},
    };
}

json higher_node_to_json(const HigherHyper& higher) {
    if (higher.is_leaf()) {
        return json{{"leaf", higher.leaf_distribution().probs()}};
    }
    json children = json::array();
    for (const HigherHyper& child : higher.children()) {
        children.push_back(higher_node_to_json(child));
    }
    return json{{"outer", higher.outer()}, {"children", std::move(children)}};
}

HigherHyper higher_node_from_json(const json& node, const SecretSpace& space) {
    if (!node.is_object()) {
        throw InvalidFormat("higher hyper: expected nested objects");
    }
    if (node.contains("leaf")) {
        return HigherHyper::leaf(Distribution(space, to_vec(node["leaf"], "higher hyper leaf")));
    }
    std::vector<HigherHyper> children;
    for (const json& child : require(node, "children", "higher hyper")) {
        children.push_back(higher_node_from_json(child, space));
    }
    return HigherHyper::node(to_vec(require(node, "outer", "higher hyper"), "higher hyper outer"),
                             std::move(children));
}

}  // namespace

json to_json(const Distribution& dist) {
    return json{{"schema", kSchemaTag}, {"labels", dist.space().labels()}, {"probs", dist.probs()}};
}

json to_json(const Channel& channel) {
    return json{{"schema", kSchemaTag},
                {"inputs", channel.input_space().labels()},
                {"outputs", channel.output_space().labels()},
                {"matrix", channel.matrix()}};
}

json to_json(const JointDistribution& joint) {
    return json{{"schema", kSchemaTag},
                {"kind", "joint"},
                {"inputs", joint.row_space().labels()},
                {"outputs", joint.col_space().labels()},
                {"matrix", joint.matrix()}};
}

json to_json(const GainFunction& gain) {
    return json{{"schema", kSchemaTag},
                {"guesses", gain.guesses()},
                {"secrets", gain.space().labels()},
                {"gain", gain.gain()}};
}

json to_json(const Hyper& hyper) {
    json inners = json::array();
    for (const Distribution& inner : hyper.inners()) inners.push_back(inner.probs());
    return json{{"schema", kSchemaTag},
                {"secrets", hyper.space().labels()},
                {"outer", hyper.outer()},
                {"inners", std::move(inners)}};
}

json to_json(const HigherHyper& higher) {
    json doc = higher_node_to_json(higher);
    doc["schema"] = kSchemaTag;
    doc["secrets"] = higher.space().labels();
    return doc;
}

json to_json(const RefinementWitness& witness) {
    json doc{{"schema", kSchemaTag}, {"holds", witness.holds}, {"residual", witness.residual}};
    doc["matrix"] = witness.matrix ? to_json(*witness.matrix) : json(nullptr);
    return doc;
}

json to_json(const SecurityDecomposition& decomposition, const std::string& measure) {
    json doc = decomposition_body(decomposition);
    doc["schema"] = kSchemaTag;
    doc["measure"] = measure;
    return doc;
}

json to_json(const DecompositionReport& report) {
    json rows = json::array();
    for (const DecompositionRow& row : report.rows) {
        json entry = decomposition_body(row.decomposition);
        entry["abstraction"] = row.name;
        rows.push_back(std::move(entry));
    }
    return json{{"schema", kSchemaTag}, {"measure", report.measure}, {"rows", std::move(rows)}};
}

Distribution distribution_from_json(const json& doc) {
    check_schema(doc, "distribution");
    SecretSpace space(to_labels(require(doc, "labels", "distribution"), "distribution"));
    return Distribution(std::move(space), to_vec(require(doc, "probs", "distribution"), "distribution"));
}

Channel channel_from_json(const json& doc) {
    check_schema(doc, "channel");
    if (doc.contains("kind") && doc["kind"] == "joint") {
        throw InvalidFormat("channel: document is marked \"kind\":\"joint\"");
    }
    SecretSpace inputs(to_labels(require(doc, "inputs", "channel"), "channel"));
    SecretSpace outputs(to_labels(require(doc, "outputs", "channel"), "channel"));
    return Channel(std::move(inputs), std::move(outputs),
                   to_mat(require(doc, "matrix", "channel"), "channel"));
}

JointDistribution joint_from_json(const json& doc) {
    check_schema(doc, "joint");
    if (require(doc, "kind", "joint") != "joint") {
        throw InvalidFormat("joint: expected \"kind\":\"joint\"");
    }
    SecretSpace inputs(to_labels(require(doc, "inputs", "joint"), "joint"));
    SecretSpace outputs(to_labels(require(doc, "outputs", "joint"), "joint"));
    return JointDistribution(std::move(inputs), std::move(outputs),
                             to_mat(require(doc, "matrix", "joint"), "joint"));
}

GainFunction gain_from_json(const json& doc) {
    check_schema(doc, "gain function");
    std::vector<std::string> guesses =
        to_labels(require(doc, "guesses", "gain function"), "gain function");
    SecretSpace secrets(to_labels(require(doc, "secrets", "gain function"), "gain function"));
    return GainFunction(std::move(guesses), std::move(secrets),
                        to_mat(require(doc, "gain", "gain function"), "gain function"));
}

Hyper hyper_from_json(const json& doc) {
    check_schema(doc, "hyper");
    SecretSpace space(to_labels(require(doc, "secrets", "hyper"), "hyper"));
    Vec outer = to_vec(require(doc, "outer", "hyper"), "hyper outer");
    const json& inners_node = require(doc, "inners", "hyper");
    if (!inners_node.is_array()) {
        throw InvalidFormat("hyper: \"inners\" must be an array");
    }
    std::vector<Distribution> inners;
    inners.reserve(inners_node.size());
    for (const json& inner : inners_node) {
        inners.emplace_back(space, to_vec(inner, "hyper inner"));
    }
    return Hyper(std::move(space), std::move(inners), std::move(outer));
}

HigherHyper higher_hyper_from_json(const json& doc) {
    check_schema(doc, "higher hyper");
    SecretSpace space(to_labels(require(doc, "secrets", "higher hyper"), "higher hyper"));
    return higher_node_from_json(doc, space);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open \"" + path + "\"");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidFormat("\"" + path + "\": " + e.what());
    }
    return doc;
}

void save_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write \"" + path + "\"");
    out << doc.dump(2) << "\n";
}

}  // namespace hyperqif::io
