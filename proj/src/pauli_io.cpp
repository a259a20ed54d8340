#include "qccilc/pauli_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qccilc/errors.hpp"

namespace qccilc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto h = line.find('#');
  return h == std::string_view::npos ? line : line.substr(0, h);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  const std::string s(tok);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE) {
    throw ParseError(line_no, "not a number: \"" + s + "\"");
  }
  return v;
}

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& rest) {
  rest = trim(rest);
  const auto e = rest.find_first_of(" \t");
  auto tok = rest.substr(0, e);
  rest = e == std::string_view::npos ? std::string_view{} : rest.substr(e);
  return tok;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string to_pauli_text(const SparsePauliOp& op) { return to_pauli_text(op, std::nullopt); }

std::string to_pauli_text(const SparsePauliOp& op, const std::optional<BitVec>& reference) {
  std::string out = "qubits " + std::to_string(op.num_qubits()) + "\n";
  if (reference) out += "# reference " + reference->to_string() + "\n";
  for (const auto& [w, c] : op) {
    out += format_real(c.real());
    out += ' ';
    out += format_real(c.imag());
    out += ' ';
    out += w.to_string();
    out += '\n';
  }
  return out;
}

SparsePauliOp parse_pauli_text(std::string_view text, double prune_threshold) {
  std::optional<PauliAccumulator> acc;
  std::size_t line_no = 0;
  std::size_t n_qubits = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (!acc) {
      auto rest = line;
      if (next_token(rest) != "qubits") throw ParseError(line_no, "expected header 'qubits <n>'");
      const auto count = next_token(rest);
      if (count.empty() || !trim(rest).empty()) {
        throw ParseError(line_no, "expected header 'qubits <n>'");
      }
      const double n = parse_double(count, line_no);
      if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) {
        throw ParseError(line_no, "qubit count must be a positive integer");
      }
      n_qubits = static_cast<std::size_t>(n);
      acc.emplace(n_qubits, prune_threshold);
      continue;
    }

    auto rest = line;
    const auto re_tok = next_token(rest);
    const auto im_tok = next_token(rest);
    const auto word_text = trim(rest);
    if (im_tok.empty() || word_text.empty()) {
      throw ParseError(line_no, "expected '<re> <im> <word>'");
    }
    const Complex c(parse_double(re_tok, line_no), parse_double(im_tok, line_no));
    try {
      acc->add(PauliWord::parse(word_text, n_qubits), c);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.detail());
    }
  }
  if (!acc) throw ParseError(0, "missing 'qubits <n>' header");
  return std::move(*acc).finish();
}

std::optional<BitVec> find_reference_hint(std::string_view text) {
  constexpr std::string_view key = "# reference ";
  for (auto pos = text.find(key); pos != std::string_view::npos; pos = text.find(key, pos + 1)) {
    if (pos != 0 && text[pos - 1] != '\n') continue;
    auto rest = text.substr(pos + key.size());
    rest = rest.substr(0, rest.find('\n'));
    return BitVec::from_string(next_token(rest));
  }
  return std::nullopt;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SparsePauliOp read_pauli_file(const std::filesystem::path& path, double prune_threshold) {
  const auto text = read_text_file(path);
  try {
    return parse_pauli_text(text, prune_threshold);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

void write_pauli_file(const std::filesystem::path& path, const SparsePauliOp& op,
                      const std::optional<BitVec>& reference) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_pauli_text(op, reference);
}

}  // namespace qccilc
