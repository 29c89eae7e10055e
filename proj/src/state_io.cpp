#include "qce/state_io.hpp"

#include <fstream>

namespace qce {

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int n = static_cast<int>(re.size());
  if (n == 0 || static_cast<int>(im.size()) != n) throw DimensionError("state file: re/im row counts differ");
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n) {
      throw DimensionError("state file: matrix is not square");
    }
    for (int k = 0; k < n; ++k) m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return m;
}

BipartiteState state_from_json(const nlohmann::json& j) {
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2) throw DimensionError("state file: dims must be [dA, dB]");
  return BipartiteState(matrix_from_json(j.at("matrix")), dims[0].get<int>(), dims[1].get<int>());
}

nlohmann::json state_to_json(const BipartiteState& rho) {
  return {{"dims", {rho.dim_a(), rho.dim_b()}}, {"matrix", matrix_to_json(rho.matrix())}};
}

BipartiteState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file " + path);
  return state_from_json(nlohmann::json::parse(in));
}

void save_state(const BipartiteState& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write state file " + path);
  out << state_to_json(rho).dump(2) << "\n";
}

}  // namespace qce
