#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "hawe/pvdm.hpp"

namespace hawe {

void export_embeddings(const EmbeddingModel& model, const Corpus& corpus,
                       std::span<const std::string> raw_ids, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# dim=" << model.dim << " mode=" << to_string(model.mode)
      << " walk_length=" << model.walk_length << " samples=" << model.samples
      << " window=" << model.window << '\n';
  char buf[32];
  for (NodeId v : corpus.nodes) {
    out << (v < raw_ids.size() ? raw_ids[v] : std::to_string(v));
    for (double x : model.node_vectors.row(v)) {
      std::snprintf(buf, sizeof buf, "%.9g", x);
      out << '\t' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());

  EmbeddingTable table;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string kv;
      while (header >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
          if (key == "dim") {
            table.dim = static_cast<std::uint32_t>(std::stoul(value));
            have_dim = true;
          } else if (key == "mode") {
            table.mode = value;
          } else if (key == "walk_length") {
            table.walk_length = static_cast<std::uint32_t>(std::stoul(value));
          } else if (key == "samples") {
            table.samples = static_cast<std::uint32_t>(std::stoul(value));
          } else if (key == "window") {
            table.window = static_cast<std::uint32_t>(std::stoul(value));
          }
        } catch (const std::exception&) {
          throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad header value '" +
                           kv + "'");
        }
      }
      continue;
    }

    std::istringstream fields(line);
    std::string id;
    std::getline(fields, id, '\t');
    std::vector<double> row;
    std::string cell;
    while (std::getline(fields, cell, '\t')) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell +
                         "'");
      }
      row.push_back(x);
    }
    if (!have_dim) {
      table.dim = static_cast<std::uint32_t>(row.size());
      have_dim = true;
    }
    if (row.size() != table.dim || row.empty()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.dim) + " values, got " + std::to_string(row.size()));
    }
    table.ids.push_back(std::move(id));
    values.insert(values.end(), row.begin(), row.end());
  }

  table.values = Matrix(table.ids.size(), table.dim);
  table.values.data() = std::move(values);
  return table;
}

namespace {
constexpr char kModelMagic[9] = "HAWEMODL";

void put_matrix(detail::BinaryWriter& out, const Matrix& m) {
  out.put<std::uint64_t>(m.rows());
  out.put<std::uint64_t>(m.cols());
  out.bytes(m.data().data(), m.data().size() * sizeof(double));
}

Matrix get_matrix(detail::BinaryReader& in) {
  const auto rows = in.get<std::uint64_t>();
  const auto cols = in.get<std::uint64_t>();
  if (rows > (1ULL << 32) || cols > (1ULL << 20) || rows * cols > (1ULL << 36)) {
    throw InputError(in.path().string() + ": corrupt matrix shape");
  }
  Matrix m(rows, cols);
  in.bytes(m.data().data(), m.data().size() * sizeof(double));
  return m;
}
}  // namespace

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  detail::BinaryWriter out(path);
  out.bytes(kModelMagic, 8);
  out.put<std::uint32_t>(kModelFormatVersion);
  out.put<std::uint32_t>(model.dim);
  out.put<std::uint32_t>(model.window);
  out.put<std::uint8_t>(static_cast<std::uint8_t>(model.mode));
  out.put<std::uint32_t>(model.walk_length);
  out.put<std::uint32_t>(model.samples);
  put_matrix(out, model.node_vectors);
  put_matrix(out, model.token_vectors);
  put_matrix(out, model.inner_weights);
  out.put_vector(model.inner_bias);
  out.put<std::uint64_t>(model.tree.num_leaves());
  for (std::size_t leaf = 0; leaf < model.tree.num_leaves(); ++leaf) {
    out.put_vector(model.tree.codes[leaf]);
    out.put_vector(model.tree.paths[leaf]);
  }
  out.finish();
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  detail::BinaryReader in(path);
  in.expect_header(kModelMagic, kModelFormatVersion);
  EmbeddingModel model;
  model.dim = in.get<std::uint32_t>();
  model.window = in.get<std::uint32_t>();
  const auto mode = in.get<std::uint8_t>();
  if (mode > static_cast<std::uint8_t>(WalkMode::CHAW)) {
    throw InputError(path.string() + ": unknown walk mode tag");
  }
  model.mode = static_cast<WalkMode>(mode);
  model.walk_length = in.get<std::uint32_t>();
  model.samples = in.get<std::uint32_t>();
  model.node_vectors = get_matrix(in);
  model.token_vectors = get_matrix(in);
  model.inner_weights = get_matrix(in);
  model.inner_bias = in.get_vector<double>(1ULL << 32);
  const auto leaves = in.get<std::uint64_t>();
  if (leaves != model.token_vectors.rows()) throw InputError(path.string() + ": tree/lexicon size mismatch");
  model.tree.codes.resize(leaves);
  model.tree.paths.resize(leaves);
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    model.tree.codes[leaf] = in.get_vector<std::uint8_t>(64);
    model.tree.paths[leaf] = in.get_vector<std::uint32_t>(64);
  }
  return model;
}

}  // namespace hawe
