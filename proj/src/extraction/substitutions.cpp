#include "lexemes.hpp"
#include "texcas/extraction.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace texcas::extraction {

using detail::Lexeme;

bool SubstitutionRule::applies_to(std::string_view chapter) const {
  return chapters.empty() || std::find(chapters.begin(), chapters.end(), chapter) != chapters.end();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> non_space(std::string_view s) {
  std::vector<std::string> out;
  for (auto& l : detail::lex(s))
    if (!l.space) out.push_back(std::move(l.text));
  return out;
}

}  // namespace

SubstitutionConfig load_substitutions(std::istream& in) {
  SubstitutionConfig cfg;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto p1 = t.find('|');
    const auto p2 = p1 == std::string::npos ? std::string::npos : t.find('|', p1 + 1);
    if (p2 == std::string::npos)
      throw std::runtime_error("substitutions line " + std::to_string(n) + ": expected 'chapters | pattern | replacement'");
    SubstitutionRule rule;
    const auto chapters_field = trim(std::string_view(t).substr(0, p1));
    rule.pattern = trim(std::string_view(t).substr(p1 + 1, p2 - p1 - 1));
    rule.replacement = trim(std::string_view(t).substr(p2 + 1));
    if (rule.pattern.empty())
      throw std::runtime_error("substitutions line " + std::to_string(n) + ": empty pattern");
    if (chapters_field != "*") {
      std::istringstream cs(chapters_field);
      for (std::string c; std::getline(cs, c, ',');) {
        c = trim(c);
        if (!find_chapter(c))
          throw std::runtime_error("substitutions line " + std::to_string(n) + ": unknown chapter " + c);
        rule.chapters.push_back(c);
      }
    }
    cfg.rules.push_back(std::move(rule));
  }
  return cfg;
}

SubstitutionConfig load_substitutions_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_substitutions(in);
}

SubstitutionConfig load_substitutions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open substitutions file " + path);
  return load_substitutions(in);
}

std::string apply_substitutions(std::string_view latex, std::string_view chapter,
                                const SubstitutionConfig& subst) {
  struct Active {
    std::vector<std::string> pattern;
    const std::string* replacement;
  };
  std::vector<Active> active;
  for (const auto& r : subst.rules)
    if (r.applies_to(chapter)) active.push_back({non_space(r.pattern), &r.replacement});
  if (active.empty()) return std::string(latex);
  std::stable_sort(active.begin(), active.end(),
                   [](const Active& a, const Active& b) { return a.pattern.size() > b.pattern.size(); });

  const auto lx = detail::lex(latex);
  std::string out;
  std::size_t i = 0;
  while (i < lx.size()) {
    const auto& l = lx[i];
    if (l.text == "\\text" || l.text == "\\mathrm" || l.text == "\\textrm" || l.text == "\\mbox" ||
        l.text == "\\operatorname" || l.text == "\\begin" || l.text == "\\end" || l.text == "\\label") {
      // copy the command and its text group verbatim
      out += l.text;
      ++i;
      while (i < lx.size() && lx[i].space) out += lx[i++].text;
      if (i < lx.size() && lx[i].text == "{") {
        int depth = 0;
        do {
          if (lx[i].text == "{") ++depth;
          if (lx[i].text == "}") --depth;
          out += lx[i++].text;
        } while (i < lx.size() && depth > 0);
      }
      continue;
    }
    if (l.space) {
      out += l.text;
      ++i;
      continue;
    }
    bool replaced = false;
    for (const auto& a : active) {
      std::size_t j = i, k = 0;
      while (k < a.pattern.size() && j < lx.size()) {
        if (lx[j].space) {
          if (k == 0) break;
          ++j;
          continue;
        }
        if (lx[j].text != a.pattern[k]) break;
        ++j;
        ++k;
      }
      if (k == a.pattern.size()) {
        detail::append_guarded(out, *a.replacement);
        i = j;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      detail::append_guarded(out, l.text);
      ++i;
    }
  }
  return out;
}

}  // namespace texcas::extraction
