#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/corpus.hpp"
#include "hyperqif/envanalysis.hpp"
#include "hyperqif/hyper.hpp"
#include "hyperqif/measures.hpp"

namespace py = pybind11;
using namespace hyperqif;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hyper-distribution representations of adversarial prior knowledge: "
              "environmental and strategy vulnerability, abstractions, refinement "
              "checking and the perceived-security decomposition.";

    py::register_exception<Error>(m, "HyperqifError");

    py::class_<SecretSpace>(m, "SecretSpace")
        .def(py::init<std::vector<std::string>>(), py::arg("labels"))
        .def("labels", &SecretSpace::labels)
        .def("index_of", &SecretSpace::index_of, py::arg("label"))
        .def("__len__", &SecretSpace::size)
        .def("__eq__", [](const SecretSpace& a, const SecretSpace& b) { return a == b; });

    py::class_<Distribution>(m, "Distribution")
        .def(py::init<SecretSpace, Vec>(), py::arg("space"), py::arg("probs"))
        .def_static("point", &Distribution::point, py::arg("space"), py::arg("label"))
        .def_static("uniform", &Distribution::uniform, py::arg("space"))
        .def("space", &Distribution::space)
        .def("probs", &Distribution::probs)
        .def("support", &Distribution::support)
        .def("__len__", &Distribution::size)
        .def("__getitem__", [](const Distribution& d, std::size_t i) { return d[i]; });

    py::class_<Channel>(m, "Channel")
        .def(py::init<SecretSpace, SecretSpace, Mat>(), py::arg("input_space"),
             py::arg("output_space"), py::arg("matrix"))
        .def_static("identity", &Channel::identity, py::arg("space"))
        .def_static("noninterferent", &Channel::noninterferent, py::arg("input_space"),
                    py::arg("output_label") = "*")
        .def("input_space", &Channel::input_space)
        .def("output_space", &Channel::output_space)
        .def("matrix", &Channel::matrix)
        .def("is_deterministic", &Channel::is_deterministic);

    py::class_<JointDistribution>(m, "JointDistribution")
        .def(py::init<SecretSpace, SecretSpace, Mat>(), py::arg("row_space"),
             py::arg("col_space"), py::arg("matrix"))
        .def("row_space", &JointDistribution::row_space)
        .def("col_space", &JointDistribution::col_space)
        .def("matrix", &JointDistribution::matrix);

    py::class_<MarginalsAndConditionals>(m, "MarginalsAndConditionals")
        .def_readonly("row_marginal", &MarginalsAndConditionals::row_marginal)
        .def_readonly("col_marginal", &MarginalsAndConditionals::col_marginal)
        .def_readonly("row_conditionals", &MarginalsAndConditionals::row_conditionals)
        .def_readonly("col_conditionals", &MarginalsAndConditionals::col_conditionals);

    py::class_<GainFunction>(m, "GainFunction")
        .def(py::init<std::vector<std::string>, SecretSpace, Mat>(), py::arg("guesses"),
             py::arg("space"), py::arg("gain"))
        .def_static("identity", &GainFunction::identity, py::arg("space"))
        .def("guesses", &GainFunction::guesses)
        .def("space", &GainFunction::space)
        .def("gain", py::overload_cast<>(&GainFunction::gain, py::const_));

    py::class_<VulnerabilityMeasure>(m, "VulnerabilityMeasure")
        .def_static("bayes", &VulnerabilityMeasure::bayes)
        .def_static("g_based", &VulnerabilityMeasure::g_based, py::arg("gain"),
                    py::arg("name") = "g")
        .def("is_bayes", &VulnerabilityMeasure::is_bayes)
        .def("name", &VulnerabilityMeasure::name)
        .def("prior_vulnerability", &VulnerabilityMeasure::prior_vulnerability)
        .def("__call__", &VulnerabilityMeasure::prior_vulnerability);

    py::class_<Hyper>(m, "Hyper")
        .def(py::init<SecretSpace, std::vector<Distribution>, Vec>(), py::arg("space"),
             py::arg("inners"), py::arg("outer"))
        .def("space", &Hyper::space)
        .def("inners", &Hyper::inners)
        .def("outer", &Hyper::outer)
        .def("__len__", &Hyper::size);

    py::class_<HyperDecomposition>(m, "HyperDecomposition")
        .def_readonly("prior", &HyperDecomposition::prior)
        .def_readonly("channel", &HyperDecomposition::channel);

    py::class_<HigherHyper>(m, "HigherHyper")
        .def_static("leaf", &HigherHyper::leaf, py::arg("dist"))
        .def_static("node", &HigherHyper::node, py::arg("outer"), py::arg("children"))
        .def("is_leaf", &HigherHyper::is_leaf)
        .def("depth", &HigherHyper::depth)
        .def("space", &HigherHyper::space);

    py::class_<SecurityDecomposition>(m, "SecurityDecomposition")
        .def_readonly("perceived", &SecurityDecomposition::perceived)
        .def_readonly("by_aggregation", &SecurityDecomposition::by_aggregation)
        .def_readonly("by_strategy", &SecurityDecomposition::by_strategy)
        .def_readonly("perceived_bits", &SecurityDecomposition::perceived_bits)
        .def_readonly("by_aggregation_bits", &SecurityDecomposition::by_aggregation_bits)
        .def_readonly("by_strategy_bits", &SecurityDecomposition::by_strategy_bits);

    py::class_<RefinementWitness>(m, "RefinementWitness")
        .def_readonly("holds", &RefinementWitness::holds)
        .def_readonly("matrix", &RefinementWitness::matrix)
        .def_readonly("residual", &RefinementWitness::residual);

    m.def("joint_from", &joint_from, py::arg("prior"), py::arg("channel"));
    m.def("marginals_and_conditionals", &marginals_and_conditionals, py::arg("joint"));
    m.def("push_through", &push_through, py::arg("prior"), py::arg("channel"));
    m.def("point_hyper", &point_hyper, py::arg("prior"));
    m.def("prior_of", &prior_of, py::arg("hyper"));
    m.def("joint_matrix", &joint_matrix, py::arg("hyper"));
    m.def("from_joint", &from_joint, py::arg("joint"));
    m.def("decompose", &decompose, py::arg("hyper"));
    m.def("reduce", &reduce, py::arg("hyper"), py::arg("tolerance") = kNormTolerance);
    m.def("collapse", &collapse, py::arg("higher"));
    m.def("vulnerability_n", &vulnerability_n, py::arg("measure"), py::arg("higher"));

    m.def("g_vulnerability", &g_vulnerability, py::arg("gain"), py::arg("prior"));
    m.def("bayes_vulnerability", &bayes_vulnerability, py::arg("prior"));
    m.def("optimal_guess", &optimal_guess, py::arg("gain"), py::arg("prior"));
    m.def("optimal_guess_index", &optimal_guess_index, py::arg("gain"), py::arg("prior"));
    m.def("hyper_vulnerability", &hyper_vulnerability, py::arg("measure"), py::arg("hyper"));
    m.def("posterior_g_vulnerability", &posterior_g_vulnerability, py::arg("gain"),
          py::arg("prior"), py::arg("channel"));
    m.def("joint_bayes", &joint_bayes, py::arg("joint"));

    m.def("environmental_vulnerability", &environmental_vulnerability, py::arg("measure"),
          py::arg("environment"));
    m.def("strategy_vulnerability", &strategy_vulnerability, py::arg("measure"),
          py::arg("environment"));
    m.def("decompose_security", &decompose_security, py::arg("measure"), py::arg("environment"));
    m.def("bayes_ratio_lower_bound", &bayes_ratio_lower_bound, py::arg("environment"));
    m.def("min_entropy_bits", &min_entropy_bits, py::arg("value"));

    m.def("apply_aggregation", &apply_aggregation, py::arg("hyper"), py::arg("aggregation"));
    m.def("check_abstracts", &check_abstracts, py::arg("abstracted"), py::arg("concrete"),
          py::arg("tolerance") = kFeasibilityTolerance);
    m.def("model_vulnerability", &model_vulnerability, py::arg("gain"), py::arg("environment"),
          py::arg("aggregation"));
    m.def("strategy_vulnerability_given", &strategy_vulnerability_given, py::arg("measure"),
          py::arg("environment"), py::arg("model"),
          py::arg("tolerance") = kFeasibilityTolerance);
    m.def("refinement_ratio", &refinement_ratio, py::arg("measure"), py::arg("environment"),
          py::arg("model"), py::arg("coarser"), py::arg("tolerance") = kFeasibilityTolerance);

    // Corpus pipeline
    py::class_<CorpusRecord>(m, "CorpusRecord")
        .def(py::init([](std::string secret, std::map<std::string, std::string> attributes) {
                 return CorpusRecord{std::move(secret), std::move(attributes)};
             }),
             py::arg("secret"), py::arg("attributes") = std::map<std::string, std::string>{})
        .def_readwrite("secret", &CorpusRecord::secret)
        .def_readwrite("attributes", &CorpusRecord::attributes);

    py::class_<CorpusSchema>(m, "CorpusSchema")
        .def(py::init([](std::string secret_column, std::vector<std::string> attribute_columns) {
                 return CorpusSchema{std::move(secret_column), std::move(attribute_columns)};
             }),
             py::arg("secret_column"), py::arg("attribute_columns") = std::vector<std::string>{})
        .def_readwrite("secret_column", &CorpusSchema::secret_column)
        .def_readwrite("attribute_columns", &CorpusSchema::attribute_columns);

    py::class_<IngestResult>(m, "IngestResult")
        .def_readonly("records", &IngestResult::records)
        .def_readonly("malformed_rows", &IngestResult::malformed_rows);

    m.def(
        "ingest",
        [](const std::string& path, const CorpusSchema& schema, const std::string& delimiter,
           std::size_t max_bad_rows) {
            IngestOptions options;
            options.max_bad_rows = max_bad_rows;
            if (delimiter == "comma") options.delimiter = Delimiter::Comma;
            else if (delimiter == "tab") options.delimiter = Delimiter::Tab;
            return ingest(path, schema, options);
        },
        py::arg("path"), py::arg("schema"), py::arg("delimiter") = "auto",
        py::arg("max_bad_rows") = std::numeric_limits<std::size_t>::max());

    m.def("extract_year", [](const std::string& secret) { return extract_year(secret); },
          py::arg("secret"));
    m.def("annotate_years", &annotate_years, py::arg("records"), py::arg("attribute_name") = "year");

    py::class_<NamedAbstraction>(m, "NamedAbstraction")
        .def_readonly("name", &NamedAbstraction::name)
        .def_readonly("hyper", &NamedAbstraction::hyper)
        .def_readonly("matrix", &NamedAbstraction::matrix);

    py::class_<EnvironmentBundle>(m, "EnvironmentBundle")
        .def_static("build_omniscient", &EnvironmentBundle::build_omniscient, py::arg("records"))
        .def("space", &EnvironmentBundle::space)
        .def("record_count", &EnvironmentBundle::record_count)
        .def("prior", &EnvironmentBundle::prior)
        .def("omniscient", &EnvironmentBundle::omniscient)
        .def("omniscient_vulnerability", &EnvironmentBundle::omniscient_vulnerability,
             py::arg("measure"))
        .def("set_bayes_shortcut", &EnvironmentBundle::set_bayes_shortcut, py::arg("on"))
        .def("abstract_by", &EnvironmentBundle::abstract_by, py::arg("attribute"))
        .def("add_abstraction", &EnvironmentBundle::add_abstraction, py::arg("name"),
             py::arg("attribute"), py::return_value_policy::reference_internal)
        .def("abstractions", &EnvironmentBundle::abstractions,
             py::return_value_policy::reference_internal);

    py::class_<DecompositionRow>(m, "DecompositionRow")
        .def_readonly("name", &DecompositionRow::name)
        .def_readonly("decomposition", &DecompositionRow::decomposition);

    py::class_<DecompositionReport>(m, "DecompositionReport")
        .def_readonly("measure", &DecompositionReport::measure)
        .def_readonly("rows", &DecompositionReport::rows);

    m.def("decomposition_report", &decomposition_report, py::arg("bundle"), py::arg("measure"));
    m.def("render_decomposition_table", &render_decomposition_table, py::arg("report"));
    m.def("plot_data_csv", &plot_data_csv, py::arg("bundle"));

#ifdef HYPERQIF_VERSION
    m.attr("__version__") = HYPERQIF_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
