#include "multival/witness.hpp"

#include <cctype>

#include "multival/error.hpp"

namespace multival {

Witness& Witness::add(std::string key, std::string value) {
  if (value.find('"') != std::string::npos) throw Error(ErrorKind::InvalidSpec, "witness value contains a quote");
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

bool Witness::has(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return true;
  }
  return false;
}

const std::string& Witness::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::ParseError, "witness '" + kind + "' has no field '" + std::string(key) + "'");
}

std::string Witness::to_line() const {
  std::string out = "WITNESS: " + kind;
  for (const auto& [k, v] : fields) {
    bool quote = v.empty() || v.find(' ') != std::string::npos;
    out += " " + k + "=" + (quote ? "\"" + v + "\"" : v);
  }
  return out;
}

Witness parse_witness(std::string_view line) {
  constexpr std::string_view prefix = "WITNESS:";
  if (line.substr(0, prefix.size()) != prefix) throw Error(ErrorKind::ParseError, "not a WITNESS line");
  std::size_t pos = prefix.size();
  auto skip = [&] {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  };
  skip();
  std::size_t start = pos;
  while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  Witness w(std::string(line.substr(start, pos - start)));
  if (w.kind.empty()) throw Error(ErrorKind::ParseError, "WITNESS line has no kind");
  for (skip(); pos < line.size(); skip()) {
    std::size_t eq = line.find('=', pos);
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, "expected key=value in WITNESS line");
    std::string key(line.substr(pos, eq - pos));
    pos = eq + 1;
    std::string value;
    if (pos < line.size() && line[pos] == '"') {
      std::size_t close = line.find('"', pos + 1);
      if (close == std::string_view::npos) throw Error(ErrorKind::ParseError, "unterminated quote in WITNESS line");
      value = std::string(line.substr(pos + 1, close - pos - 1));
      pos = close + 1;
    } else {
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      value = std::string(line.substr(pos, end - pos));
      pos = end;
    }
    w.fields.emplace_back(std::move(key), std::move(value));
  }
  return w;
}

}  // namespace multival
