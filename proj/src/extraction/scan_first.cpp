#include "lexemes.hpp"
#include "texcas/extraction.hpp"
#include "texcas/parser.hpp"

#include <algorithm>
#include <array>

namespace texcas::extraction {

namespace {

constexpr std::array kFormulaEnvironments{"equation", "equationmix", "equationgroup", "align"};

bool is_formula_env(std::string_view name) {
  return std::find(kFormulaEnvironments.begin(), kFormulaEnvironments.end(), name) !=
         kFormulaEnvironments.end();
}

// Commands removed together with their optional [..] and one {..} argument.
const std::vector<std::string> kArgumentCommands = {"\\MarkNotation", "\\origref", "\\note",
                                                    "\\lxRefDeclaration", "\\index", "\\source",
                                                    "\\authorproof"};

// Spacing and layout commands replaced by plain whitespace.
const std::vector<std::string> kSpacingCommands = {"\\,", "\\!", "\\;", "\\:", "\\>", "\\ ",
                                                   "\\*", "\\quad", "\\qquad", "&"};

std::string strip_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_comment = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_comment) {
      if (c == '\n') {
        in_comment = false;
        out += c;
      }
      continue;
    }
    if (c == '\\' && i + 1 < s.size()) {
      out += c;
      out += s[++i];
      continue;
    }
    if (c == '%') {
      in_comment = true;
      continue;
    }
    out += c;
  }
  return out;
}

int line_of(std::string_view text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                                          std::min(offset, text.size())),
                                         '\n'));
}

bool command_at(std::string_view s, std::size_t pos, std::string_view cmd) {
  if (s.compare(pos, cmd.size(), cmd) != 0) return false;
  const auto after = pos + cmd.size();
  if (detail::Lexeme::is_letter(cmd.back()) && after < s.size() && detail::Lexeme::is_letter(s[after]))
    return false;
  // the backslash must not itself be escaped
  std::size_t slashes = 0;
  for (std::size_t m = pos; m > 0 && s[m - 1] == '\\'; --m) ++slashes;
  return slashes % 2 == 0;
}

std::size_t skip_spaces(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
  return i;
}

struct EnvSpan {
  std::string name;
  std::size_t begin = 0;          // position of \begin
  std::size_t content_begin = 0;  // after \begin{name}
  std::size_t content_end = 0;    // position of \end{name}
  std::size_t end = 0;            // after \end{name}
};

// Next \begin{name} at or after `from` for one of the formula environments.
std::optional<EnvSpan> next_env(std::string_view s, std::size_t from, std::size_t limit) {
  for (std::size_t p = s.find("\\begin", from); p != std::string_view::npos && p < limit;
       p = s.find("\\begin", p + 1)) {
    if (!command_at(s, p, "\\begin")) continue;
    auto q = skip_spaces(s, p + 6);
    if (q >= s.size() || s[q] != '{') continue;
    const auto close = s.find('}', q);
    if (close == std::string_view::npos) continue;
    std::string name(s.substr(q + 1, close - q - 1));
    if (!is_formula_env(name)) continue;
    EnvSpan env{name, p, close + 1, 0, 0};
    const std::string open_tag = "\\begin{" + name + "}";
    const std::string close_tag = "\\end{" + name + "}";
    int depth = 1;
    std::size_t cursor = env.content_begin;
    while (depth > 0) {
      const auto o = s.find(open_tag, cursor);
      const auto c = s.find(close_tag, cursor);
      if (c == std::string_view::npos)
        throw ExtractionError(ExtractionError::Kind::UnclosedEnvironment,
                              line_of(s, p),
                              "unclosed environment {" + name + "}");
      if (o != std::string_view::npos && o < c) {
        ++depth;
        cursor = o + open_tag.size();
      } else {
        --depth;
        cursor = c + close_tag.size();
        if (depth == 0) {
          env.content_end = c;
          env.end = cursor;
        }
      }
    }
    return env;
  }
  return std::nullopt;
}

// Removes every `\cmd{...}` from `s`, returning the group contents.
std::vector<std::string> take_command(std::string& s, std::string_view cmd, bool constraint, int line) {
  std::vector<std::string> found;
  for (std::size_t p = s.find(cmd); p != std::string::npos; p = s.find(cmd, p)) {
    if (!command_at(s, p, cmd)) {
      ++p;
      continue;
    }
    auto q = skip_spaces(s, p + cmd.size());
    if (q >= s.size() || s[q] != '{') {
      if (constraint)
        throw ExtractionError(ExtractionError::Kind::MalformedConstraintEnvironment, line,
                              "\\constraint without a braced body");
      ++p;
      continue;
    }
    const auto end = detail::match_brace(s, q);
    if (end == std::string::npos) {
      if (constraint)
        throw ExtractionError(ExtractionError::Kind::MalformedConstraintEnvironment, line,
                              "unbalanced braces in \\constraint");
      ++p;
      continue;
    }
    found.emplace_back(s.substr(q + 1, end - q - 2));
    s.replace(p, end - p, " ");
  }
  return found;
}

void remove_argument_commands(std::string& s) {
  for (const auto& cmd : kArgumentCommands) {
    for (std::size_t p = s.find(cmd); p != std::string::npos; p = s.find(cmd, p)) {
      if (!command_at(s, p, cmd)) {
        ++p;
        continue;
      }
      auto q = skip_spaces(s, p + cmd.size());
      while (q < s.size() && s[q] == '[') {
        const auto close = s.find(']', q);
        if (close == std::string::npos) break;
        q = skip_spaces(s, close + 1);
      }
      if (q < s.size() && s[q] == '{') {
        const auto end = detail::match_brace(s, q);
        if (end != std::string::npos) q = end;
      }
      s.replace(p, q - p, " ");
    }
  }
}

void remove_layout(std::string& s) {
  // line breaks \\ with an optional [..] spacing argument
  for (std::size_t p = s.find("\\\\"); p != std::string::npos; p = s.find("\\\\", p)) {
    auto q = skip_spaces(s, p + 2);
    if (q < s.size() && s[q] == '[') {
      const auto close = s.find(']', q);
      q = close == std::string::npos ? p + 2 : close + 1;
    } else {
      q = p + 2;
    }
    s.replace(p, q - p, " ");
  }
  for (const auto& cmd : kSpacingCommands) {
    for (std::size_t p = s.find(cmd); p != std::string::npos; p = s.find(cmd, p)) {
      if (cmd[0] == '\\' ? !command_at(s, p, cmd) : (p > 0 && s[p - 1] == '\\')) {
        ++p;
        continue;
      }
      s.replace(p, cmd.size(), " ");
    }
  }
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  std::replace(s.begin(), s.end(), '\t', ' ');
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(' ');
  return std::string(s.substr(b, e - b + 1));
}

std::string trim_trailing_punctuation(std::string s) {
  s = trim(s);
  if (s.empty()) return s;
  const char last = s.back();
  if (last != '.' && last != ',' && last != ';') return s;
  if (s.size() >= 2 && s[s.size() - 2] == '\\') return s;
  int depth = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '{') ++depth;
    if (s[i] == '}') --depth;
  }
  if (depth != 0) return s;
  s.pop_back();
  return trim(s);
}

// Splits at top-level `\\` line breaks (brace depth 0).
std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size() && s[i + 1] == '\\' && depth == 0) {
      out.emplace_back(s.substr(start, i - start));
      i += 2;
      auto q = skip_spaces(s, i);
      if (q < s.size() && s[q] == '[') {
        const auto close = s.find(']', q);
        if (close != std::string_view::npos) i = close + 1;
      }
      start = i;
      --i;
      continue;
    }
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}') --depth;
  }
  out.emplace_back(s.substr(start));
  return out;
}

class FirstScan {
public:
  FirstScan(const ChapterSource& src, const SubstitutionConfig& subst, std::string text)
      : src_(src), subst_(subst), text_(std::move(text)) {}

  std::vector<FormulaRecord> run() {
    std::size_t pos = 0;
    while (auto env = next_env(text_, pos, text_.size())) {
      process(*env, {}, {});
      pos = env->end;
    }
    return std::move(records_);
  }

private:
  const ChapterSource& src_;
  const SubstitutionConfig& subst_;
  std::string text_;
  std::vector<FormulaRecord> records_;

  std::string clean(std::string s) {
    remove_argument_commands(s);
    remove_layout(s);
    s = apply_substitutions(s, src_.chapter_code, subst_);
    return normalize_latex(trim_trailing_punctuation(s));
  }

  std::vector<std::string> constraint_strings(const std::vector<std::string>& bodies, int line) {
    std::vector<std::string> out;
    for (const auto& body : bodies) {
      const auto dollars = std::count(body.begin(), body.end(), '$') -
                           static_cast<std::ptrdiff_t>([&] {
                             std::size_t esc = 0;
                             for (std::size_t p = body.find("\\$"); p != std::string::npos;
                                  p = body.find("\\$", p + 2))
                               ++esc;
                             return esc;
                           }());
      if (dollars % 2 != 0)
        throw ExtractionError(ExtractionError::Kind::MalformedConstraintEnvironment, line,
                              "unbalanced $ in \\constraint");
      std::size_t p = 0;
      while (true) {
        auto a = body.find('$', p);
        while (a != std::string::npos && a > 0 && body[a - 1] == '\\') a = body.find('$', a + 1);
        if (a == std::string::npos) break;
        auto b = body.find('$', a + 1);
        while (b != std::string::npos && body[b - 1] == '\\') b = body.find('$', b + 1);
        if (b == std::string::npos) break;
        auto c = clean(body.substr(a + 1, b - a - 1));
        if (!c.empty()) out.push_back(std::move(c));
        p = b + 1;
      }
    }
    return out;
  }

  void emit(std::string body, int line, const std::optional<std::string>& label,
            const std::vector<std::string>& constraints) {
    auto latex = clean(std::move(body));
    if (latex.empty()) return;
    FormulaRecord r;
    r.chapter_code = src_.chapter_code;
    r.id = src_.chapter_code + "." + std::to_string(records_.size() + 1);
    r.latex = std::move(latex);
    r.constraints = constraints;
    r.label = label;
    r.source_line = line;
    records_.push_back(std::move(r));
  }

  void process(const EnvSpan& env, std::optional<std::string> inherited_label,
               std::vector<std::string> inherited_constraints) {
    const int line = line_of(text_, env.content_begin);
    std::string_view content(text_.data() + env.content_begin, env.content_end - env.content_begin);

    // nested formula environments: the text around them carries group metadata
    std::vector<EnvSpan> inner;
    for (std::size_t p = env.content_begin;;) {
      auto e = next_env(text_, p, env.content_end);
      if (!e) break;
      inner.push_back(*e);
      p = e->end;
    }
    if (!inner.empty()) {
      std::string outside;
      std::size_t p = env.content_begin;
      for (const auto& e : inner) {
        outside.append(text_, p, e.begin - p);
        p = e.end;
      }
      outside.append(text_, p, env.content_end - p);
      auto labels = take_command(outside, "\\label", false, line);
      auto constraints = constraint_strings(take_command(outside, "\\constraint", true, line), line);
      std::optional<std::string> label = labels.empty() ? inherited_label : std::optional(trim(labels[0]));
      constraints.insert(constraints.begin(), inherited_constraints.begin(), inherited_constraints.end());
      for (const auto& e : inner) process(e, label, constraints);
      return;
    }

    std::vector<std::string> pieces;
    if (env.name == "align" || env.name == "equationmix")
      pieces = split_lines(content);
    else
      pieces.emplace_back(content);

    std::vector<std::vector<std::string>> piece_labels;
    std::vector<std::string> env_constraints = inherited_constraints;
    std::optional<std::string> env_label;
    for (auto& piece : pieces) {
      auto labels = take_command(piece, "\\label", false, line);
      for (auto& l : labels) l = trim(l);
      if (!env_label && !labels.empty()) env_label = labels[0];
      piece_labels.push_back(std::move(labels));
      auto cs = constraint_strings(take_command(piece, "\\constraint", true, line), line);
      env_constraints.insert(env_constraints.end(), cs.begin(), cs.end());
    }
    if (!env_label) env_label = inherited_label;
    std::size_t offset_in_content = 0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const int piece_line = line + static_cast<int>(std::count(
                                        content.begin(),
                                        content.begin() + static_cast<std::ptrdiff_t>(
                                                              std::min(offset_in_content, content.size())),
                                        '\n'));
      std::optional<std::string> label = piece_labels[k].empty() ? env_label : std::optional(piece_labels[k][0]);
      offset_in_content = content.find("\\\\", offset_in_content);
      offset_in_content = offset_in_content == std::string_view::npos ? content.size() : offset_in_content + 2;
      emit(pieces[k], piece_line, label, env_constraints);
    }
  }
};

}  // namespace

const std::vector<std::string>& stripped_commands() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> l = kArgumentCommands;
    l.insert(l.end(), {"\\,", "\\!", "\\\\", "&", "\\*"});
    return l;
  }();
  return list;
}

std::string normalize_latex(std::string_view latex) {
  try {
    return parser::render_tokens(parser::tokenize(latex));
  } catch (const parser::ParseError&) {
    std::string out;
    for (const auto& l : detail::lex(latex)) {
      if (l.space) {
        if (!out.empty()) out += ' ';
      } else {
        out += l.text;
      }
    }
    return trim(out);
  }
}

std::vector<FormulaRecord> scan_first(const ChapterSource& source, const SubstitutionConfig& subst) {
  if (!find_chapter(source.chapter_code))
    throw ExtractionError(ExtractionError::Kind::UnknownChapterCode, 0,
                          "unknown chapter code '" + source.chapter_code + "'");
  FirstScan scan(source, subst, strip_comments(source.body));
  return scan.run();
}

ChapterSource make_chapter_source(std::string chapter_code, std::string tex) {
  ChapterSource src;
  src.chapter_code = std::move(chapter_code);
  const auto text = strip_comments(tex);
  for (std::string_view cmd : {"\\newcommand", "\\renewcommand", "\\providecommand", "\\def"}) {
    for (std::size_t p = text.find(cmd); p != std::string::npos; p = text.find(cmd, p + 1)) {
      if (!command_at(text, p, cmd)) continue;
      auto q = skip_spaces(text, p + cmd.size());
      if (q < text.size() && text[q] == '*') q = skip_spaces(text, q + 1);
      PreambleMacro m;
      if (q < text.size() && text[q] == '{') {
        const auto end = detail::match_brace(text, q);
        if (end == std::string::npos) continue;
        m.command = trim(text.substr(q + 1, end - q - 2));
        q = skip_spaces(text, end);
      } else if (q < text.size() && text[q] == '\\') {
        auto e = q + 1;
        while (e < text.size() && detail::Lexeme::is_letter(text[e])) ++e;
        m.command = text.substr(q, e - q);
        q = skip_spaces(text, e);
      } else {
        continue;
      }
      if (cmd == "\\def") {
        while (q + 1 < text.size() && text[q] == '#' && std::isdigit(static_cast<unsigned char>(text[q + 1]))) {
          ++m.num_args;
          q += 2;
        }
      } else if (q < text.size() && text[q] == '[') {
        const auto close = text.find(']', q);
        if (close == std::string::npos) continue;
        m.num_args = std::stoi(text.substr(q + 1, close - q - 1));
        q = skip_spaces(text, close + 1);
      }
      if (q >= text.size() || text[q] != '{') continue;
      const auto end = detail::match_brace(text, q);
      if (end == std::string::npos) continue;
      m.replacement = text.substr(q + 1, end - q - 2);
      if (m.command.size() < 2 || m.command[0] != '\\') continue;
      src.preamble_macros.push_back(std::move(m));
    }
  }
  src.body = std::move(tex);
  return src;
}

}  // namespace texcas::extraction
