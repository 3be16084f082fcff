#include "lingvar/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lingvar/error.hpp"
#include "lingvar/text.hpp"

namespace lingvar {
namespace {

class TomlParser {
 public:
  explicit TomlParser(std::string_view s) : s_(s) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        bool array = s_.substr(i_).starts_with("[[");
        i_ += array ? 2 : 1;
        auto path = key_path();
        skip_ws();
        expect(']');
        if (array) expect(']');
        table = open_table(root, path, array);
      } else {
        auto path = key_path();
        skip_ws();
        expect('=');
        skip_ws();
        nlohmann::json v = value();
        nlohmann::json* t = table;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
          auto& next = (*t)[path[k]];
          if (next.is_null()) next = nlohmann::json::object();
          if (!next.is_object()) fail("key '" + path[k] + "' is not a table");
          t = &next;
        }
        if (t->contains(path.back())) fail("duplicate key '" + path.back() + "'");
        (*t)[path.back()] = std::move(v);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) line += s_[k] == '\n';
    throw Error(ErrorCode::invalid_config, "TOML line " + std::to_string(line) + ": " + msg);
  }
  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++i_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++i_;
    }
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++i_;
      } else {
        break;
      }
    }
  }
  // Inside arrays and inline tables newlines and comments are insignificant.
  void skip_space_nl() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++i_;
      } else {
        break;
      }
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++i_;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++i_;
  }

  std::string bare_or_quoted_key() {
    skip_ws();
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += s_[i_++];
    if (k.empty()) fail("expected a key");
    return k;
  }
  std::vector<std::string> key_path() {
    std::vector<std::string> path = {bare_or_quoted_key()};
    skip_ws();
    while (peek() == '.') {
      ++i_;
      path.push_back(bare_or_quoted_key());
      skip_ws();
    }
    return path;
  }

  nlohmann::json* open_table(nlohmann::json& root, const std::vector<std::string>& path, bool array) {
    nlohmann::json* t = &root;
    for (std::size_t k = 0; k < path.size(); ++k) {
      auto& next = (*t)[path[k]];
      const bool last = k + 1 == path.size();
      if (last && array) {
        if (next.is_null()) next = nlohmann::json::array();
        if (!next.is_array()) fail("'" + path[k] + "' is not an array of tables");
        next.push_back(nlohmann::json::object());
        return &next.back();
      }
      if (next.is_null()) next = nlohmann::json::object();
      if (next.is_array() && !next.empty()) {
        t = &next.back();
        continue;
      }
      if (!next.is_object()) fail("'" + path[k] + "' is not a table");
      t = &next;
    }
    return t;
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      char e = s_[i_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'u': {
          if (i_ + 4 > s_.size()) fail("bad \\u escape");
          unsigned cp = static_cast<unsigned>(std::stoul(std::string(s_.substr(i_, 4)), nullptr, 16));
          i_ += 4;
          if (cp < 0x80) {
            out += static_cast<char>(cp);
          } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
          } else {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
          }
          break;
        }
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    return out;
  }
  std::string literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  nlohmann::json value() {
    char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') {
      ++i_;
      nlohmann::json arr = nlohmann::json::array();
      skip_space_nl();
      while (peek() != ']') {
        arr.push_back(value());
        skip_space_nl();
        if (peek() == ',') {
          ++i_;
          skip_space_nl();
        } else if (peek() != ']') {
          fail("expected ',' or ']'");
        }
      }
      ++i_;
      return arr;
    }
    if (c == '{') {
      ++i_;
      nlohmann::json obj = nlohmann::json::object();
      skip_ws();
      while (peek() != '}') {
        auto path = key_path();
        skip_ws();
        expect('=');
        skip_ws();
        nlohmann::json* t = &obj;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) t = &(*t)[path[k]];
        (*t)[path.back()] = value();
        skip_ws();
        if (peek() == ',') {
          ++i_;
          skip_ws();
        } else if (peek() != '}') {
          fail("expected ',' or '}'");
        }
      }
      ++i_;
      return obj;
    }
    std::string tok;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
           peek() != '}' && peek() != '#') {
      tok += s_[i_++];
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    if (digits.empty()) fail("expected a value");
    try {
      std::size_t used = 0;
      if (digits.find_first_of(".eE") == std::string::npos) {
        long long v = std::stoll(digits, &used);
        if (used == digits.size()) return v;
      } else {
        double v = std::stod(digits, &used);
        if (used == digits.size()) return v;
      }
    } catch (const std::logic_error&) {
    }
    fail("unsupported value '" + tok + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::invalid_config, std::string("bad type for '") + key + "'");
  }
}

}  // namespace

nlohmann::json parse_toml(std::string_view source) { return TomlParser(source).parse(); }

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.ends_with(".toml")) return parse_toml(buf.str());
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, "config '" + path + "': " + e.what());
  }
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_config, "config root must be a table");
  RunConfig c;
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.provider_mode = provider_mode_from_string(get_or<std::string>(j, "provider_mode", "mock"));
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
  c.profile = get_or<std::string>(j, "profile", c.profile);
  c.variations_file = get_or<std::string>(j, "variations_file", c.variations_file);

  if (j.contains("providers")) {
    const auto& ps = j.at("providers");
    if (!ps.is_object()) throw Error(ErrorCode::invalid_config, "[providers] must be a table of profiles");
    for (const auto& [name, body] : ps.items()) {
      nlohmann::json b = body;
      b["name"] = name;
      c.profiles.emplace(name, profile_from_json(b));
    }
  }
  if (c.profiles.empty()) c.profiles.emplace("default", ProviderProfile{});
  if (!c.profiles.count(c.profile)) throw Error(ErrorCode::invalid_config, "unknown profile '" + c.profile + "'");

  const nlohmann::json field = j.value("field", nlohmann::json::object());
  EntityKind kind = EntityKind::from_tag(get_or<std::string>(field, "kind", "zip_code"));
  c.field = kind.is_extension() ? FieldSpec{kind.tag(), kind, "string", "", ""} : default_field_spec(kind);
  c.field.field_name = get_or<std::string>(field, "name", c.field.field_name);
  c.field.question = get_or<std::string>(field, "question", c.field.question);
  c.field.description = get_or<std::string>(field, "description", c.field.description);
  c.field.output_type = get_or<std::string>(field, "output_type", c.field.output_type);

  const nlohmann::json gen = j.value("generation", nlohmann::json::object());
  c.num_values = get_or<std::size_t>(gen, "num_values", c.num_values);
  c.target_per_pair = get_or<std::size_t>(gen, "target_per_pair", c.target_per_pair);
  c.max_rounds = get_or<std::size_t>(gen, "max_rounds", c.max_rounds);
  c.parallelism = get_or<std::size_t>(gen, "parallelism", c.parallelism);
  c.variations = get_or<std::vector<std::string>>(gen, "variations", c.variations);
  c.validation = validation_mode_from_string(get_or<std::string>(gen, "validation", "oracle"));

  const nlohmann::json split = j.value("split", nlohmann::json::object());
  auto ratios = get_or<std::vector<double>>(split, "ratios", {0.7, 0.15, 0.15});
  if (ratios.size() != 3) throw Error(ErrorCode::invalid_ratios, "split.ratios needs three values");
  c.ratios = {ratios[0], ratios[1], ratios[2]};

  const nlohmann::json opt = j.value("optimizer", nlohmann::json::object());
  c.optimizer.batch_size = get_or<std::size_t>(opt, "batch_size", c.optimizer.batch_size);
  c.optimizer.iterations = get_or<std::size_t>(opt, "iterations", c.optimizer.iterations);
  c.optimizer.pool_size = get_or<std::size_t>(opt, "pool_size", c.optimizer.pool_size);
  c.optimizer.mutation_count = get_or<std::size_t>(opt, "mutation_count", c.optimizer.mutation_count);
  c.optimizer.seed = c.seed;
  return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["provider_mode"] = lingvar::to_string(provider_mode);
  j["output_dir"] = output_dir;
  j["profile"] = profile;
  nlohmann::ordered_json ps = nlohmann::ordered_json::object();
  for (const auto& [name, p] : profiles) ps[name] = lingvar::to_json(p);
  j["providers"] = ps;
  j["field"] = {{"kind", field.kind.tag()},
                {"name", field.field_name},
                {"question", field.question},
                {"description", field.description},
                {"output_type", field.output_type}};
  j["generation"] = {{"num_values", num_values}, {"target_per_pair", target_per_pair}, {"max_rounds", max_rounds},
                     {"parallelism", parallelism}, {"variations", variations},
                     {"validation", lingvar::to_string(validation)}};
  j["split"] = {{"ratios", {ratios.train, ratios.valid, ratios.test}}};
  j["optimizer"] = {{"batch_size", optimizer.batch_size}, {"iterations", optimizer.iterations},
                    {"pool_size", optimizer.pool_size}, {"mutation_count", optimizer.mutation_count}};
  if (!variations_file.empty()) j["variations_file"] = variations_file;
  return j;
}

const ProviderProfile& RunConfig::active_profile() const {
  auto it = profiles.find(profile);
  if (it == profiles.end()) throw Error(ErrorCode::invalid_config, "no provider profile named '" + profile + "'");
  return it->second;
}

GenerationConfig RunConfig::generation_config() const {
  GenerationConfig g;
  g.spec = field;
  g.num_values = num_values;
  g.target_per_pair = target_per_pair;
  g.max_rounds = max_rounds;
  g.provider_mode = provider_mode;
  g.seed = seed;
  g.parallelism = provider_mode == ProviderMode::mock ? 1 : parallelism;
  g.variation_ids = variations;
  return g;
}

}  // namespace lingvar
