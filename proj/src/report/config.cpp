#include "texcas/report.hpp"

#include "../constraints/token_util.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace texcas::report {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

PipelineError::PipelineError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

std::string_view to_string(PipelineError::Kind k) {
  switch (k) {
    case PipelineError::Kind::MissingInputFile: return "MissingInputFile";
    case PipelineError::Kind::ConfigParseError: return "ConfigParseError";
  }
  return "?";
}

PipelineConfig default_config(const std::string& data_dir) {
  const fs::path d(data_dir);
  PipelineConfig c;
  c.corpus = (d / "corpus" / "mini_corpus.jsonl").string();
  c.macro_table = (d / "macro_table.txt").string();
  c.translation_table = (d / "translation_table.txt").string();
  c.blueprints = (d / "blueprints.txt").string();
  c.rewrite_rules = (d / "rewrite_rules.txt").string();
  return c;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw PipelineError(PipelineError::Kind::ConfigParseError, what); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  bad(key + ": expected an integer, got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  bad(key + ": expected a number, got '" + v + "'");
}

// `1/2`, `-0.5`, or an imaginary value with a trailing `i` (`3/2i`).
numeric::TestValue to_test_value(const std::string& v) {
  std::string s = v;
  const bool imaginary = !s.empty() && s.back() == 'i';
  if (imaginary) s.pop_back();
  const auto r = constraints::detail::parse_rational(s);
  if (!r) bad("test_values: cannot read '" + v + "'");
  return imaginary ? numeric::TestValue{0, *r} : numeric::TestValue{*r, 0};
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path.string();
  return (fs::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

PipelineConfig load_config(std::istream& in, const std::string& base_dir, PipelineConfig c) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) bad("key '" + section + "' outside a section");
    if (section != "paths" && section != "verify" && section != "symbolic" && section != "numeric")
      bad("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string v = trim(node.data());
      const std::string where = section + "." + key;
      if (section == "paths") {
        if (key == "corpus") c.corpus = resolve(base_dir, v);
        else if (key == "macro_table") c.macro_table = resolve(base_dir, v);
        else if (key == "translation_table") c.translation_table = resolve(base_dir, v);
        else if (key == "blueprints") c.blueprints = resolve(base_dir, v);
        else if (key == "rewrite_rules") c.rewrite_rules = resolve(base_dir, v);
        else bad("unknown key " + where);
      } else if (section == "verify") {
        if (key == "stages") {
          const auto s = lower(v);
          if (s == "symbolic") c.stages = VerifyStages::Symbolic;
          else if (s == "numeric") c.stages = VerifyStages::Numeric;
          else if (s == "both") c.stages = VerifyStages::Both;
          else bad(where + ": expected symbolic, numeric or both");
        } else if (key == "chapter") {
          if (v.empty()) c.chapter.reset();
          else if (!extraction::find_chapter(v)) bad(where + ": unknown chapter code '" + v + "'");
          else c.chapter = v;
        } else if (key == "jobs") {
          c.jobs = to_int(where, v);
          if (c.jobs < 1) bad(where + " must be at least 1");
        } else {
          bad("unknown key " + where);
        }
      } else if (section == "symbolic") {
        if (key == "mode") {
          const auto m = symbolic::simplify_mode_from_string(v);
          if (!m) bad(where + ": unknown mode '" + v + "'");
          c.symbolic.mode = *m;
        } else if (key == "preprocessors") {
          c.symbolic.preprocessors.clear();
          for (const auto& name : split_list(v)) {
            const auto p = symbolic::preprocessor_from_string(name);
            if (!p) bad(where + ": unknown preprocessor '" + name + "'");
            c.symbolic.preprocessors.push_back(*p);
          }
          if (c.symbolic.preprocessors.empty()) bad(where + " is empty");
        } else if (key == "rewrite_step_budget") {
          c.symbolic.rewrite_step_budget = to_int(where, v);
          if (c.symbolic.rewrite_step_budget < 1) bad(where + " must be positive");
        } else {
          bad("unknown key " + where);
        }
      } else if (section == "numeric") {
        if (key == "test_values") {
          c.numeric.test_values.clear();
          for (const auto& item : split_list(v)) c.numeric.test_values.push_back(to_test_value(item));
        } else if (key == "threshold") {
          c.numeric.threshold = to_double(where, v);
        } else if (key == "precision_digits") {
          c.numeric.precision_digits = to_int(where, v);
        } else if (key == "timeout_seconds") {
          c.numeric.timeout_seconds = to_int(where, v);
        } else if (key == "comparison_mode") {
          const auto m = lower(v);
          if (m == "absolutedifference" || m == "absolute") c.numeric.comparison_mode = numeric::ComparisonMode::AbsoluteDifference;
          else if (m == "relativedifference" || m == "relative") c.numeric.comparison_mode = numeric::ComparisonMode::RelativeDifference;
          else if (m == "quotient") c.numeric.comparison_mode = numeric::ComparisonMode::Quotient;
          else bad(where + ": unknown comparison mode '" + v + "'");
        } else {
          bad("unknown key " + where);
        }
      }
    }
  }
  try {
    numeric::validate(c.numeric);
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  return c;
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig defaults) {
  std::ifstream in(path);
  if (!in) throw PipelineError(PipelineError::Kind::MissingInputFile, "cannot open config " + path);
  return load_config(in, fs::path(path).parent_path().string(), std::move(defaults));
}

}  // namespace texcas::report
