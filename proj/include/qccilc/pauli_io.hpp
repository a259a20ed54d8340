#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qccilc/bits.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// Renders the ".pauli" text format:
///
///     qubits <n>
///     <re> <im> <word>
///
/// one line per term in canonical order, coefficients with 17 significant
/// digits so that parsing recovers every double exactly.
std::string to_pauli_text(const SparsePauliOp& op);

/// Optional `# reference <bits>` comment emitted after the header.
std::string to_pauli_text(const SparsePauliOp& op, const std::optional<BitVec>& reference);

/// Parses the ".pauli" format. '#' starts a comment; duplicate words are summed.
SparsePauliOp parse_pauli_text(std::string_view text, double prune_threshold = kDefaultPruneThreshold);

/// Bit string from a `# reference <bits>` comment, if the text carries one.
std::optional<BitVec> find_reference_hint(std::string_view text);

SparsePauliOp read_pauli_file(const std::filesystem::path& path,
                              double prune_threshold = kDefaultPruneThreshold);
void write_pauli_file(const std::filesystem::path& path, const SparsePauliOp& op,
                      const std::optional<BitVec>& reference = std::nullopt);

/// Shortest "%.17g" rendering that always contains a decimal point or exponent.
std::string format_real(double v);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace qccilc
