#pragma once

// JSON for graphs and backbone chains, CSV helpers.

#include <string>
#include <vector>

#include "combspec/comb.hpp"
#include "combspec/graph.hpp"

namespace combspec {

// {"vertices":[{"id":str,"condition":"KN"|"D"}],"edges":[{"a":str,"b":str,"length":number}]}
std::string graph_to_json(const MetricGraph& g, int indent = 2);
MetricGraph graph_from_json(const std::string& text);

// {"positions":[...],"segments":[...],"teeth":[[{"length":x,"tip":"KN"|"D"}...]...],
//  "left":"KN"|"D","right":"KN"|"D","names":[...]}
std::string chain_to_json(const BackboneChain& chain, int indent = 2);
BackboneChain chain_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Round-trip safe decimal text (17 significant digits).
std::string format_real(double x);

/// Minimal CSV table: header row plus rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace combspec
