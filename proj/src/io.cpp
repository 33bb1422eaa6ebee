#include "combspec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace combspec {

using nlohmann::json;

namespace {

Condition parse_condition(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == "KN" || s == "N" || s == "neumann" || s == "kirchhoff") {
    return Condition::KirchhoffNeumann;
  }
  if (s == "D" || s == "dirichlet") return Condition::Dirichlet;
  throw std::invalid_argument("unknown vertex condition '" + s + "'");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string graph_to_json(const MetricGraph& g, int indent) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : g.vertices()) {
    j["vertices"].push_back({{"id", v.id}, {"condition", std::string(to_string(v.condition))}});
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back(
        {{"a", g.vertices()[e.a].id}, {"b", g.vertices()[e.b].id}, {"length", e.length}});
  }
  return j.dump(indent);
}

MetricGraph graph_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    GraphBuilder b;
    for (const auto& v : j.at("vertices")) {
      const Condition c = v.contains("condition") ? parse_condition(v.at("condition"))
                                                  : Condition::KirchhoffNeumann;
      b.add_vertex(v.at("id").get<std::string>(), c);
    }
    for (const auto& e : j.at("edges")) {
      b.add_edge(e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                 e.at("length").get<double>());
    }
    return std::move(b).build();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad graph JSON: ") + e.what());
  }
}

std::string chain_to_json(const BackboneChain& chain, int indent) {
  json j;
  j["positions"] = chain.positions;
  j["segments"] = chain.segments;
  j["teeth"] = json::array();
  for (const auto& list : chain.teeth) {
    json node = json::array();
    for (const auto& t : list) {
      node.push_back({{"length", t.length}, {"tip", std::string(to_string(t.tip))}});
    }
    j["teeth"].push_back(std::move(node));
  }
  j["left"] = std::string(to_string(chain.left));
  j["right"] = std::string(to_string(chain.right));
  j["names"] = chain.names;
  return j.dump(indent);
}

BackboneChain chain_from_json(const std::string& text) {
  const json j = parse(text);
  BackboneChain c;
  try {
    c.segments = j.at("segments").get<std::vector<double>>();
    if (j.contains("positions")) c.positions = j.at("positions").get<std::vector<double>>();
    if (j.contains("names")) c.names = j.at("names").get<std::vector<std::string>>();
    if (j.contains("left")) c.left = parse_condition(j.at("left"));
    if (j.contains("right")) c.right = parse_condition(j.at("right"));
    for (const auto& node : j.at("teeth")) {
      std::vector<Tooth> list;
      // A bare number is shorthand for one Neumann-tipped tooth; null for none.
      if (node.is_number()) {
        list.push_back({node.get<double>(), Condition::KirchhoffNeumann});
      } else if (!node.is_null()) {
        for (const auto& t : node) {
          if (t.is_number()) {
            list.push_back({t.get<double>(), Condition::KirchhoffNeumann});
          } else {
            list.push_back({t.at("length").get<double>(),
                            t.contains("tip") ? parse_condition(t.at("tip"))
                                              : Condition::KirchhoffNeumann});
          }
        }
      }
      c.teeth.push_back(std::move(list));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad chain JSON: ") + e.what());
  }
  c.validate();
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace combspec
