#ifndef QCFL_IO_HPP
#define QCFL_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qcfl/chomsky.hpp"
#include "qcfl/domain.hpp"
#include "qcfl/grammar.hpp"
#include "qcfl/pushdown.hpp"
#include "qcfl/stepfn.hpp"

namespace qcfl {

/// Builds a weight domain from its spec text: boolean | nat | tropical |
/// avgsup | truncavg <digits> | chain <n> | lattice <path> |
/// magma-fold <path> | adjoin-unit <spec> | nat-product <spec>.
/// Paths are resolved against base_dir.
DomainPtr make_domain(std::string_view spec_text,
                      const std::filesystem::path& base_dir = ".");

LatticeTable parse_lattice_table(const std::string& text);
MagmaTable parse_magma_table(const std::string& text);

WeightedGrammar parse_grammar(const std::string& text,
                              const std::filesystem::path& base_dir = ".");
std::string serialize_grammar(const WeightedGrammar& g);

WeightedPushdown parse_pda(const std::string& text,
                           const std::filesystem::path& base_dir = ".");
std::string serialize_pda(const WeightedPushdown& m);

/// Step grammars are referenced by file path, resolved against base_dir.
StepFunction parse_stepfn(const std::string& text,
                          const std::filesystem::path& base_dir = ".");
/// Serializes the header; the step grammars are written to the named files
/// by the caller (see the CLI's stepfn-extract).
std::string serialize_stepfn_header(const StepFunction& sf,
                                    const std::vector<std::string>& grammar_files);

CSDecomposition parse_decomposition(const std::string& text,
                                    const std::filesystem::path& base_dir = ".");
std::string serialize_decomposition(const CSDecomposition& dec);

enum class ArtifactKind { Grammar, Pushdown, StepFunction, Decomposition };

/// Detects the artifact kind from the header keyword of the text.
ArtifactKind detect_artifact(const std::string& text);

std::string read_file(const std::filesystem::path& path);

} // namespace qcfl

#endif
