#include "hyperqif/envanalysis.hpp"

#include <cmath>

namespace hyperqif {

double min_entropy_bits(double v) {
    return -std::log2(std::max(v, 1e-300)) + 0.0;  // +0.0 normalizes -0
}

double environmental_vulnerability(const VulnerabilityMeasure& measure,
                                   const Hyper& environment) {
    return hyper_vulnerability(measure, environment);
}

double strategy_vulnerability(const VulnerabilityMeasure& measure,
                              const Hyper& environment) {
    const double env_vulnerability = environmental_vulnerability(measure, environment);
    if (!(env_vulnerability > 0.0)) {
        throw ZeroEnvironmentalVulnerability(
            "environmental vulnerability is not positive; the strategy "
            "vulnerability ratio is undefined");
    }
    return measure.prior_vulnerability(prior_of(environment)) / env_vulnerability;
}

SecurityDecomposition decompose_security(const VulnerabilityMeasure& measure,
                                         const Hyper& environment) {
    const double env_vulnerability = environmental_vulnerability(measure, environment);
    if (!(env_vulnerability > 0.0)) {
        throw ZeroEnvironmentalVulnerability(
            "environmental vulnerability is not positive; the decomposition "
            "is undefined");
    }
    SecurityDecomposition d;
    d.perceived = measure.prior_vulnerability(prior_of(environment));
    d.by_strategy = env_vulnerability;
    d.by_aggregation = d.perceived / d.by_strategy;
    d.perceived_bits = min_entropy_bits(d.perceived);
    d.by_aggregation_bits = min_entropy_bits(d.by_aggregation);
    d.by_strategy_bits = min_entropy_bits(d.by_strategy);
    return d;
}

double bayes_ratio_lower_bound(const Hyper& environment) {
    return strategy_vulnerability(VulnerabilityMeasure::bayes(), environment);
}

}  // namespace hyperqif
