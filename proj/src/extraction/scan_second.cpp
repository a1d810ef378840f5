#include "lexemes.hpp"
#include "texcas/extraction.hpp"
#include "texcas/parser.hpp"

#include <set>

namespace texcas::extraction {

namespace {

const std::set<std::string, std::less<>> kCulledCommands = {
    "\\sum",  "\\int",    "\\iint",    "\\iiint",   "\\oint",    "\\prod",   "\\lim",
    "\\liminf", "\\limsup", "\\dots",  "\\ldots",   "\\cdots",   "\\vdots",  "\\ddots",
    "\\dotsc", "\\dotsb", "\\dotsm",   "\\dotsi",   "\\dotso",   "\\sim",    "\\BigO",
    "\\littleo", "\\fDiff", "\\bDiff", "\\cDiff",   "\\asymp"};

const std::set<std::string, std::less<>> kCulledEnvironments = {
    "cases", "array", "bmatrix", "vmatrix", "Bmatrix", "pmatrix", "Matrix", "Lattice"};

const std::set<std::string, std::less<>> kRelations = {
    "=",     "<",    ">",     "\\ne", "\\neq", "\\le",       "\\leq",      "\\ge",
    "\\geq", "\\to", "\\equiv", "\\lt", "\\gt", "\\leqslant", "\\geqslant"};

std::vector<detail::Lexeme> solid(std::string_view s) {
  std::vector<detail::Lexeme> out;
  for (auto& l : detail::lex(s))
    if (!l.space) out.push_back(std::move(l));
  return out;
}

FormulaRecord child_of(const FormulaRecord& parent, std::size_t index, std::string latex) {
  FormulaRecord c = parent;
  c.id = parent.id + "-" + std::to_string(index + 1);
  c.latex = std::move(latex);
  c.split_origin = parent.split_origin.value_or(parent.id);
  return c;
}

}  // namespace

bool is_culled(std::string_view latex) {
  const auto lx = solid(latex);
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (kCulledCommands.contains(lx[i].text)) return true;
    if (lx[i].text == "\\begin" && i + 1 < lx.size() && lx[i + 1].text == "{") {
      std::string name;
      for (std::size_t k = i + 2; k < lx.size() && lx[k].text != "}"; ++k) name += lx[k].text;
      if (kCulledEnvironments.contains(name)) return true;
    }
  }
  return false;
}

bool has_relation(std::string_view latex) {
  for (const auto& l : detail::lex(latex))
    if (kRelations.contains(l.text)) return true;
  return false;
}

std::string expand_preamble_macros(std::string_view latex, const std::vector<PreambleMacro>& macros) {
  if (macros.empty()) return std::string(latex);
  std::string current(latex);
  for (int pass = 0; pass < 16; ++pass) {
    const auto lx = detail::lex(current);
    std::string out;
    bool changed = false;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const PreambleMacro* m = nullptr;
      if (lx[i].control_word())
        for (const auto& cand : macros)
          if (cand.command == lx[i].text) m = &cand;
      if (!m) {
        detail::append_guarded(out, lx[i].text);
        continue;
      }
      std::vector<std::string> args;
      std::size_t j = i + 1;
      for (int a = 0; a < m->num_args; ++a) {
        while (j < lx.size() && lx[j].space) ++j;
        if (j >= lx.size()) break;
        if (lx[j].text == "{") {
          int depth = 0;
          std::string arg;
          for (; j < lx.size(); ++j) {
            if (lx[j].text == "{" && depth++ == 0) continue;
            if (lx[j].text == "}" && --depth == 0) break;
            arg += lx[j].text;
          }
          ++j;
          args.push_back(std::move(arg));
        } else {
          args.push_back(lx[j++].text);
        }
      }
      if (static_cast<int>(args.size()) != m->num_args) {
        detail::append_guarded(out, lx[i].text);
        continue;
      }
      std::string body;
      for (std::size_t k = 0; k < m->replacement.size(); ++k) {
        const char c = m->replacement[k];
        if (c == '#' && k + 1 < m->replacement.size() && m->replacement[k + 1] >= '1' &&
            m->replacement[k + 1] <= '9') {
          const auto idx = static_cast<std::size_t>(m->replacement[k + 1] - '1');
          if (idx < args.size()) body += "{" + args[idx] + "}";
          ++k;
        } else {
          body += c;
        }
      }
      detail::append_guarded(out, "{" + body + "}");
      i = j - 1;
      changed = true;
    }
    current = std::move(out);
    if (!changed) break;
  }
  return current;
}

std::vector<FormulaRecord> split_relations(const FormulaRecord& record) {
  std::vector<parser::Token> toks;
  try {
    toks = parser::tokenize(record.latex);
  } catch (const parser::ParseError&) {
    return {record};
  }
  std::vector<std::size_t> rel_at;
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto c = toks[i].category;
    if (c == parser::TokenCategory::GroupOpen) ++depth;
    if (c == parser::TokenCategory::GroupClose) --depth;
    if (depth == 0 && c == parser::TokenCategory::Relation && kRelations.contains(toks[i].text))
      rel_at.push_back(i);
  }
  if (rel_at.size() < 2) return {record};
  auto slice = [&](std::size_t from, std::size_t to) {
    return std::vector<parser::Token>(toks.begin() + static_cast<std::ptrdiff_t>(from),
                                      toks.begin() + static_cast<std::ptrdiff_t>(to));
  };
  const auto first = slice(0, rel_at[0]);
  std::vector<FormulaRecord> out;
  for (std::size_t k = 0; k < rel_at.size(); ++k) {
    const auto end = k + 1 < rel_at.size() ? rel_at[k + 1] : toks.size();
    auto piece = first;
    piece.push_back(toks[rel_at[k]]);
    const auto rest = slice(rel_at[k] + 1, end);
    piece.insert(piece.end(), rest.begin(), rest.end());
    out.push_back(child_of(record, k, parser::render_tokens(piece)));
  }
  return out;
}

std::vector<FormulaRecord> split_plus_minus(const FormulaRecord& record) {
  const auto lx = detail::lex(record.latex);
  bool found = false;
  for (const auto& l : lx) found = found || l.text == "\\pm" || l.text == "\\mp";
  if (!found) return {record};
  std::vector<FormulaRecord> out;
  for (int variant = 0; variant < 2; ++variant) {
    std::string s;
    for (const auto& l : lx) {
      if (l.text == "\\pm")
        s += variant == 0 ? "+" : "-";
      else if (l.text == "\\mp")
        s += variant == 0 ? "-" : "+";
      else
        detail::append_guarded(s, l.text);
    }
    out.push_back(child_of(record, static_cast<std::size_t>(variant), normalize_latex(s)));
  }
  return out;
}

std::vector<FormulaRecord> scan_second(const std::vector<FormulaRecord>& records, const PreambleMap& preamble) {
  std::vector<FormulaRecord> out;
  for (const auto& r : records) {
    FormulaRecord expanded = r;
    if (auto it = preamble.find(r.chapter_code); it != preamble.end() && !it->second.empty()) {
      expanded.latex = normalize_latex(expand_preamble_macros(r.latex, it->second));
      for (auto& c : expanded.constraints) c = normalize_latex(expand_preamble_macros(c, it->second));
    }
    if (is_culled(expanded.latex)) continue;
    for (const auto& piece : split_relations(expanded))
      for (auto& signed_piece : split_plus_minus(piece))
        if (has_relation(signed_piece.latex)) out.push_back(std::move(signed_piece));
  }
  return out;
}

std::vector<PreambleMacro> substituted_preamble(const ChapterSource& source, const SubstitutionConfig& subst) {
  auto macros = source.preamble_macros;
  for (auto& m : macros) m.replacement = apply_substitutions(m.replacement, source.chapter_code, subst);
  return macros;
}

std::vector<FormulaRecord> extract_chapter(const ChapterSource& source, const SubstitutionConfig& subst) {
  PreambleMap preamble;
  preamble[source.chapter_code] = substituted_preamble(source, subst);
  return scan_second(scan_first(source, subst), preamble);
}

}  // namespace texcas::extraction
