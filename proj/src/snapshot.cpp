#include "pinn/snapshot.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void save_snapshot(const NetworkParams& net, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << std::setprecision(17);
  f << "m,d,activation\n" << net.width() << ',' << net.dim() << ',' << net.activation().name() << '\n';
  const auto rows = [&](const Mat& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) f << (k ? "," : "") << a(i, k);
      f << '\n';
    }
  };
  rows(net.theta0());
  rows(net.theta());
  for (Eigen::Index i = 0; i < net.c().size(); ++i) f << net.c()[i] << '\n';
  if (!f) throw Error("write to '" + path.string() + "' failed");
}

NetworkParams load_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line) || line != "m,d,activation") throw Error("'" + path.string() + "' is not a parameter snapshot");
  std::getline(f, line);
  const auto head = split(line);
  if (head.size() != 3) throw Error("malformed snapshot header in '" + path.string() + "'");
  const int m = std::stoi(head[0]), d = std::stoi(head[1]);
  const Activation act = Activation::from_name(head[2]);
  const auto read_rows = [&](int cols) {
    Mat a(m, cols);
    for (int i = 0; i < m; ++i) {
      if (!std::getline(f, line)) throw Error("truncated snapshot '" + path.string() + "'");
      const auto cells = split(line);
      if (static_cast<int>(cells.size()) != cols) throw Error("bad row width in '" + path.string() + "'");
      for (int k = 0; k < cols; ++k) a(i, k) = std::stod(cells[k]);
    }
    return a;
  };
  Mat theta0 = read_rows(d);
  Mat theta = read_rows(d);
  Mat c = read_rows(1);
  NetworkParams net(act, std::move(theta0), Vec(c.col(0)));
  net.theta() = theta;
  return net;
}

}  // namespace pinn
