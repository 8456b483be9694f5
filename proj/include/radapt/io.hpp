#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "radapt/deviation.hpp"
#include "radapt/domain.hpp"
#include "radapt/hypothesis.hpp"

namespace radapt {

// Shortest round-trip decimal formatting; identical input bits give
// identical text, so re-emitted files are byte-identical.
std::string format_double(double v);

// Dataset CSV: header "x_0,...,x_{I-1},y", one row per sample.
std::string dataset_to_csv(const DomainDataset& data);
DomainDataset dataset_from_csv(const std::string& text,
                               DomainId id = DomainId::target());

// Domain spec JSON:
//   {"type": "gaussian", "input_mean": ..., "input_var": ..., "dim": ...,
//    "beta_mean": ..., "beta_var": ..., "noise_mean": ..., "noise_var": ...}
//   {"type": "discrete", "atoms": [{"x": [...], "y": ..., "p": ...}, ...]}
nlohmann::json domain_spec_to_json(const DomainSpec& spec);
DomainSpec domain_spec_from_json(const nlohmann::json& j);

// Finite class JSON:
//   {"loss": {"kind": "squared"|"absolute", "a": ..., "b": ...},
//    "members": [{"weights": [...], "bias": ...} |
//                {"table": [{"x": [...], "value": ...}, ...]}, ...]}
// An omitted clamp range means the unclamped squared loss.
nlohmann::json finite_class_to_json(const FiniteHypothesisClass& klass);
FiniteHypothesisClass finite_class_from_json(const nlohmann::json& j);

nlohmann::json linear_hypothesis_to_json(const LinearHypothesis& h);
LinearHypothesis linear_hypothesis_from_json(const nlohmann::json& j);

// Tail report CSV: header "xi,empirical_p,wilson99,bound,pass".
std::string tail_report_to_csv(const TailReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace radapt
