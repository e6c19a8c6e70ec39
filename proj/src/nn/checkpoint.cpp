#include "gatsac/nn/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gatsac/core/error.hpp"

namespace gatsac::nn {
namespace {

constexpr const char* kMagic = "gatsac-checkpoint 1";

void write_tensor_line(std::ofstream& out, const Tensor& t) {
  char buf[40];
  for (int i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%a", t.data[static_cast<std::size_t>(i)]);
    out << buf << (i + 1 == t.size() ? "" : " ");
  }
  out << '\n';
}

void read_tensor_line(std::istream& in, Tensor& t, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw CheckpointError("truncated checkpoint at " + what);
  std::istringstream ss(line);
  std::string tok;
  for (int i = 0; i < t.size(); ++i) {
    if (!(ss >> tok)) throw CheckpointError("short value row at " + what);
    t.data[static_cast<std::size_t>(i)] = std::strtod(tok.c_str(), nullptr);
  }
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const ParamStore*>>& stores) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << kMagic << '\n';
  out << "stores " << stores.size() << '\n';
  for (const auto& [name, store] : stores) {
    out << "store " << name << ' ' << store->params().size() << ' ' << store->adam_step << '\n';
    for (const auto& p : store->params()) {
      out << "param " << p.name << ' ' << p.value.rows << ' ' << p.value.cols << '\n';
      write_tensor_line(out, p.value);
      write_tensor_line(out, p.m);
      write_tensor_line(out, p.v);
    }
  }
  out << "end\n";
  if (!out) throw IoError("write failure: " + path);
}

void load_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, ParamStore*>>& stores) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw CheckpointError("bad checkpoint magic in " + path);
  std::size_t nstores = 0;
  {
    std::string tag;
    in >> tag >> nstores;
    std::getline(in, line);
    if (tag != "stores") throw CheckpointError("missing store count in " + path);
  }
  if (nstores != stores.size())
    throw CheckpointError("checkpoint has " + std::to_string(nstores) + " stores, expected " +
                          std::to_string(stores.size()));

  for (const auto& [expect_name, store] : stores) {
    std::string tag, name;
    std::size_t nparams = 0;
    std::int64_t step = 0;
    in >> tag >> name >> nparams >> step;
    std::getline(in, line);
    if (tag != "store" || name != expect_name)
      throw CheckpointError("expected store " + expect_name + ", found " + name);
    if (nparams != store->params().size())
      throw CheckpointError("store " + name + ": parameter count mismatch");
    store->adam_step = step;
    for (auto& p : store->params()) {
      int rows = 0, cols = 0;
      in >> tag >> name >> rows >> cols;
      std::getline(in, line);
      if (tag != "param" || name != p.name)
        throw CheckpointError("expected param " + p.name + ", found " + name);
      if (rows != p.value.rows || cols != p.value.cols)
        throw CheckpointError("param " + p.name + ": shape " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " does not match " +
                              std::to_string(p.value.rows) + "x" + std::to_string(p.value.cols));
      read_tensor_line(in, p.value, p.name);
      read_tensor_line(in, p.m, p.name);
      read_tensor_line(in, p.v, p.name);
    }
  }
}

}  // namespace gatsac::nn
