#include "kronmle/sample_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "kronmle/errors.hpp"

namespace kronmle {

DataSample parse_sample_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("sample JSON: ") + e.what());
  }
  try {
    int m1 = doc.at("m1").get<int>();
    int m2 = doc.at("m2").get<int>();
    int n = doc.at("n").get<int>();
    if (m1 < 1 || m2 < 1 || n < 1)
      throw InvalidArgument("sample JSON: m1, m2, n must be positive");
    const auto& mats = doc.at("matrices");
    if (!mats.is_array() || static_cast<int>(mats.size()) != n)
      throw InvalidArgument("sample JSON: matrices must hold n entries");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(n);
    for (const auto& mat : mats) {
      if (!mat.is_array() || static_cast<int>(mat.size()) != m1)
        throw InvalidArgument("sample JSON: each matrix needs m1 rows");
      Eigen::MatrixXd y(m1, m2);
      for (int i = 0; i < m1; ++i) {
        const auto& row = mat.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != m2)
          throw InvalidArgument("sample JSON: each row needs m2 numbers");
        for (int j = 0; j < m2; ++j) {
          const auto& cell = row.at(j);
          if (!cell.is_number())
            throw InvalidArgument("sample JSON: entries must be numbers");
          double v = cell.get<double>();
          if (!std::isfinite(v))
            throw InvalidArgument("sample JSON: entries must be finite");
          y(i, j) = v;
        }
      }
      out.push_back(std::move(y));
    }
    return DataSample(m1, m2, std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("sample JSON: ") + e.what());
  }
}

std::string sample_to_json(const DataSample& sample) {
  nlohmann::json doc;
  doc["m1"] = sample.m1();
  doc["m2"] = sample.m2();
  doc["n"] = sample.n();
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& y : sample.matrices()) {
    nlohmann::json mat = nlohmann::json::array();
    for (int i = 0; i < sample.m1(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < sample.m2(); ++j) row.push_back(y(i, j));
      mat.push_back(std::move(row));
    }
    mats.push_back(std::move(mat));
  }
  doc["matrices"] = std::move(mats);
  return doc.dump();
}

DataSample read_sample_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open sample file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sample_json(buf.str());
}

void write_sample_json(const std::string& path, const DataSample& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open sample file for writing: " + path);
  out << sample_to_json(sample) << "\n";
  if (!out) throw InvalidArgument("failed writing sample file: " + path);
}

}  // namespace kronmle
