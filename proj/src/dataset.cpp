#include "basket/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "basket/errors.hpp"

namespace basket {

namespace {

using nlohmann::json;

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(strip(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
  throw ValidationError(ErrorCode::parse_error,
                        origin + ":" + std::to_string(line) + ": " + msg);
}

int to_int(const std::string& s, const std::string& origin, int line, const char* what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(origin, line, std::string(what) + " must be an integer, got '" + s + "'");
  }
}

double to_double(const std::string& s, const std::string& origin, int line, const char* what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(origin, line, std::string(what) + " must be a number, got '" + s + "'");
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

BasketTable read_table_csv(std::istream& in, const std::string& origin) {
  BasketTable table;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  size_t header_fields = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = strip(line);
    if (body.empty() || body[0] == '#') continue;
    const auto fields = split_csv(body);
    if (!header_seen) {
      if (fields.size() < 4 || fields[0] != "label" || fields[1] != "y" ||
          fields[2] != "n" || fields[3] != "pi0" ||
          (fields.size() == 5 && fields[4] != "weight") || fields.size() > 5)
        parse_fail(origin, lineno, "expected header 'label,y,n,pi0[,weight]'");
      header_seen = true;
      header_fields = fields.size();
      continue;
    }
    if (fields.size() != header_fields)
      parse_fail(origin, lineno,
                 "expected " + std::to_string(header_fields) + " fields, got " +
                     std::to_string(fields.size()));
    BasketRecord rec;
    rec.label = fields[0];
    rec.y = to_int(fields[1], origin, lineno, "y");
    rec.n = to_int(fields[2], origin, lineno, "n");
    rec.pi0 = to_double(fields[3], origin, lineno, "pi0");
    if (header_fields == 5 && !fields[4].empty())
      rec.weight = to_double(fields[4], origin, lineno, "weight");
    table.baskets.push_back(std::move(rec));
  }
  if (!header_seen)
    throw ValidationError(ErrorCode::empty_table, origin + ": no header line found");
  validate_table(table);
  return table;
}

BasketTable read_table_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(ErrorCode::parse_error, "cannot open '" + path + "'");
  return read_table_csv(in, path);
}

BasketTable read_table_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(ErrorCode::parse_error, origin + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("baskets") || !doc["baskets"].is_array())
    throw ValidationError(ErrorCode::parse_error,
                          origin + ": expected an object with a 'baskets' array");
  BasketTable table;
  for (const auto& item : doc["baskets"]) {
    try {
      BasketRecord rec;
      rec.label = item.at("label").get<std::string>();
      rec.y = item.at("y").get<int>();
      rec.n = item.at("n").get<int>();
      rec.pi0 = item.at("pi0").get<double>();
      if (item.contains("weight")) rec.weight = item["weight"].get<double>();
      table.baskets.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ValidationError(ErrorCode::parse_error, origin + ": " + e.what());
    }
  }
  validate_table(table);
  return table;
}

BasketTable read_table_json_file(const std::string& path) {
  return read_table_json(slurp(path), path);
}

BasketTable read_table_file(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return read_table_json_file(path);
  return read_table_csv_file(path);
}

std::string write_table_csv(const BasketTable& table) {
  bool any_weight = false;
  for (const auto& b : table.baskets) any_weight |= b.weight.has_value();
  std::ostringstream os;
  os << "label,y,n,pi0" << (any_weight ? ",weight" : "") << '\n';
  os.precision(17);
  for (const auto& b : table.baskets) {
    os << b.label << ',' << b.y << ',' << b.n << ',' << b.pi0;
    if (any_weight) {
      os << ',';
      if (b.weight) os << *b.weight;
    }
    os << '\n';
  }
  return os.str();
}

std::string write_table_json(const BasketTable& table) {
  json doc;
  doc["baskets"] = json::array();
  for (const auto& b : table.baskets) {
    json rec{{"label", b.label}, {"y", b.y}, {"n", b.n}, {"pi0", b.pi0}};
    if (b.weight) rec["weight"] = *b.weight;
    doc["baskets"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

}  // namespace basket
