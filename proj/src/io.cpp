#include "lrdmd/io.hpp"
#include "lrdmd/errors.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lrdmd {

namespace {

std::vector<double> parse_row(const std::string& line, const char* what) {
  std::vector<double> out;
  const char* p = line.c_str();
  const char* end = p + line.size();
  while (p < end) {
    char* next = nullptr;
    errno = 0;
    const double v = std::strtod(p, &next);
    if (next == p || (errno == ERANGE && std::abs(v) > 1.0))
      throw IoError(std::string("malformed number in ") + what + ": '" + line + "'");
    out.push_back(v);
    p = next;
    while (p < end && (*p == ' ' || *p == '\r')) ++p;
    if (p < end) {
      if (*p != ',') throw IoError(std::string("expected ',' in ") + what + ": '" + line + "'");
      ++p;
    }
  }
  return out;
}

Index parse_index(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || v < 0) throw IoError("bad matrix dimension '" + s + "'");
  return static_cast<Index>(v);
}

void write_row(std::ostream& os, const Matrix& M, Index i) {
  for (Index j = 0; j < M.cols(); ++j) {
    if (j) os << ',';
    os << format_double(M(i, j));
  }
  os << '\n';
}

json provenance_json(const ModelProvenance& p) {
  return json{{"dataset_hash", p.dataset_hash},
              {"method", p.method},
              {"k", p.k},
              {"rank_tol", p.rank_tol}};
}

json model_header(ModelKind kind, Index n, Index r, const ModelProvenance& prov) {
  return json{{"schema_version", schema_version},
              {"kind", to_string(kind)},
              {"n", n},
              {"r", r},
              {"provenance", provenance_json(prov)}};
}

Matrix block(const json& doc, const char* name) {
  if (!doc.contains("matrices") || !doc["matrices"].contains(name))
    throw IoError(std::string("model file lacks matrix '") + name + "'");
  return matrix_from_csv(doc["matrices"][name].get<std::string>());
}

void check_shape(const Matrix& M, Index rows, Index cols, const char* name) {
  if (M.rows() != rows || M.cols() != cols)
    throw IoError(std::string("matrix '") + name + "' has shape " + std::to_string(M.rows()) + "x" +
                  std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                  std::to_string(cols));
}

void check_header(const json& doc, ModelKind expected) {
  if (!doc.is_object()) throw IoError("model file is not a JSON object");
  if (doc.value("schema_version", -1) != schema_version)
    throw IoError("unsupported model schema version");
  if (model_kind(doc) != expected)
    throw IoError("model file holds a " + doc["kind"].get<std::string>() + " model, expected " +
                  to_string(expected));
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& os, const Matrix& M) {
  os << M.rows() << ',' << M.cols() << '\n';
  for (Index i = 0; i < M.rows(); ++i) write_row(os, M, i);
}

Matrix read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty matrix file");
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw IoError("matrix header must be 'rows,cols'");
  std::string rs = line.substr(0, comma), cs = line.substr(comma + 1);
  if (!cs.empty() && cs.back() == '\r') cs.pop_back();
  const Index rows = parse_index(rs), cols = parse_index(cs);

  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw IoError("matrix file ends after " + std::to_string(i) + " rows");
    const std::vector<double> row = parse_row(line, "matrix row");
    if (static_cast<Index>(row.size()) != cols)
      throw IoError("matrix row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                    " values, expected " + std::to_string(cols));
    for (Index j = 0; j < cols; ++j) M(i, j) = row[static_cast<std::size_t>(j)];
  }
  return M;
}

std::string matrix_to_csv(const Matrix& M) {
  std::ostringstream os;
  write_matrix_csv(os, M);
  return os.str();
}

Matrix matrix_from_csv(const std::string& text) {
  std::istringstream is(text);
  return read_matrix_csv(is);
}

void save_matrix_csv(const fs::path& path, const Matrix& M) { write_text_file(path, matrix_to_csv(M)); }

Matrix load_matrix_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_matrix_csv(is);
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os) throw IoError("write failed for " + path.string());
}

void save_dataset(const fs::path& dir, const SnapshotPair& data, json manifest) {
  manifest["schema_version"] = schema_version;
  manifest["n"] = data.n();
  manifest["m"] = data.m();
  manifest["N"] = data.trajectories();
  manifest["T"] = data.length();
  manifest["files"] = json{{"X", "X.csv"}, {"Y", "Y.csv"}};
  save_matrix_csv(dir / "X.csv", data.X());
  save_matrix_csv(dir / "Y.csv", data.Y());
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const fs::path& dir) {
  const std::string text = read_text_file(dir / "manifest.json");
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  if (manifest.value("schema_version", -1) != schema_version)
    throw IoError("unsupported dataset schema version in " + dir.string());

  Matrix X = load_matrix_csv(dir / "X.csv");
  Matrix Y = load_matrix_csv(dir / "Y.csv");
  const Index N = manifest.value("N", Index{0});
  const Index T = manifest.value("T", Index{0});
  if (manifest.value("n", Index{-1}) != X.rows() || manifest.value("m", Index{-1}) != X.cols())
    throw IoError("manifest dimensions disagree with X.csv in " + dir.string());
  SnapshotPair data = N > 0 && T > 1 ? SnapshotPair(std::move(X), std::move(Y), N, T)
                                     : SnapshotPair(std::move(X), std::move(Y));
  return Dataset{std::move(data), std::move(manifest), content_hash(text)};
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::factored: return "factored";
    case ModelKind::reduced: return "reduced";
    case ModelKind::spectral: return "spectral";
  }
  return "?";
}

json factored_to_json(const FactoredOperator& op, const ModelProvenance& prov) {
  json doc = model_header(ModelKind::factored, op.dim(), op.rank(), prov);
  doc["requested_rank"] = op.requested_rank;
  doc["flags"] = json{{"zero_data", op.flags.zero_data},
                      {"rank_deficient_x", op.flags.rank_deficient_x},
                      {"rank_reduced", op.flags.rank_reduced}};
  doc["matrices"] = json{{"P", matrix_to_csv(op.P)}, {"Q", matrix_to_csv(op.Q)}};
  return doc;
}

json reduced_to_json(const ReducedModel& model, const ModelProvenance& prov) {
  json doc = model_header(ModelKind::reduced, model.dim(), model.rank(), prov);
  doc["matrices"] = json{{"L", matrix_to_csv(model.L)},
                         {"R", matrix_to_csv(model.R)},
                         {"S", matrix_to_csv(model.S)}};
  return doc;
}

json spectral_to_json(const SpectralModel& model, const ModelProvenance& prov) {
  json doc = model_header(ModelKind::spectral, model.dim(), model.rank(), prov);
  doc["diagonalisability_warning"] = model.diagonalisability_warning;
  doc["eigvec_condition"] = model.eigvec_condition;
  Matrix ev(model.rank(), 2);
  ev.col(0) = model.eigvals.real();
  ev.col(1) = model.eigvals.imag();
  doc["matrices"] = json{{"eigvals", matrix_to_csv(ev)},
                         {"right_re", matrix_to_csv(model.right.real())},
                         {"right_im", matrix_to_csv(model.right.imag())},
                         {"left_re", matrix_to_csv(model.left.real())},
                         {"left_im", matrix_to_csv(model.left.imag())}};
  return doc;
}

ModelKind model_kind(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw IoError("model file lacks a 'kind' field");
  const std::string k = doc["kind"].get<std::string>();
  if (k == "factored") return ModelKind::factored;
  if (k == "reduced") return ModelKind::reduced;
  if (k == "spectral") return ModelKind::spectral;
  throw IoError("unknown model kind '" + k + "'");
}

FactoredOperator factored_from_json(const json& doc) {
  check_header(doc, ModelKind::factored);
  const Index n = doc.at("n").get<Index>(), r = doc.at("r").get<Index>();
  FactoredOperator op;
  op.P = block(doc, "P");
  op.Q = block(doc, "Q");
  check_shape(op.P, n, r, "P");
  check_shape(op.Q, n, r, "Q");
  op.requested_rank = doc.value("requested_rank", r);
  if (doc.contains("flags")) {
    const json& f = doc["flags"];
    op.flags.zero_data = f.value("zero_data", false);
    op.flags.rank_deficient_x = f.value("rank_deficient_x", false);
    op.flags.rank_reduced = f.value("rank_reduced", false);
  }
  return op;
}

ReducedModel reduced_from_json(const json& doc) {
  check_header(doc, ModelKind::reduced);
  const Index n = doc.at("n").get<Index>(), r = doc.at("r").get<Index>();
  ReducedModel m{block(doc, "L"), block(doc, "R"), block(doc, "S")};
  check_shape(m.L, n, r, "L");
  check_shape(m.R, n, r, "R");
  check_shape(m.S, r, r, "S");
  return m;
}

SpectralModel spectral_from_json(const json& doc) {
  check_header(doc, ModelKind::spectral);
  const Index n = doc.at("n").get<Index>(), r = doc.at("r").get<Index>();
  const Matrix ev = block(doc, "eigvals");
  const Matrix rr = block(doc, "right_re"), ri = block(doc, "right_im");
  const Matrix lr = block(doc, "left_re"), li = block(doc, "left_im");
  check_shape(ev, r, 2, "eigvals");
  check_shape(rr, n, r, "right_re");
  check_shape(ri, n, r, "right_im");
  check_shape(lr, n, r, "left_re");
  check_shape(li, n, r, "left_im");

  SpectralModel m;
  m.eigvals = ev.col(0).cast<Complex>() + Complex(0.0, 1.0) * ev.col(1).cast<Complex>();
  m.right = rr.cast<Complex>() + Complex(0.0, 1.0) * ri.cast<Complex>();
  m.left = lr.cast<Complex>() + Complex(0.0, 1.0) * li.cast<Complex>();
  m.diagonalisability_warning = doc.value("diagonalisability_warning", false);
  m.eigvec_condition = doc.value("eigvec_condition", 1.0);
  return m;
}

ModelProvenance provenance_from_json(const json& doc) {
  ModelProvenance p;
  if (!doc.contains("provenance")) return p;
  const json& j = doc["provenance"];
  p.dataset_hash = j.value("dataset_hash", std::string());
  p.method = j.value("method", std::string());
  p.k = j.value("k", Index{0});
  p.rank_tol = j.value("rank_tol", default_rank_tol);
  return p;
}

void save_json(const fs::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

json load_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_trajectory_csv(std::ostream& os, const Matrix& states) {
  const Matrix rows = states.transpose();
  for (Index t = 0; t < rows.rows(); ++t) write_row(os, rows, t);
}

Matrix read_trajectory_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(parse_row(line, "trajectory row"));
    if (rows.back().size() != rows.front().size()) throw IoError("ragged trajectory file");
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix states(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (Index t = 0; t < states.cols(); ++t)
    for (Index i = 0; i < states.rows(); ++i)
      states(i, t) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
  return states;
}

}  // namespace lrdmd
