#ifndef LRDMD_IO_HPP
#define LRDMD_IO_HPP

#include "lrdmd/reduced_models.hpp"
#include "lrdmd/snapshots.hpp"
#include "lrdmd/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace lrdmd {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int schema_version = 1;

// Matrix text block: a "rows,cols" header line, then one line per row with
// comma-separated values at 17 significant digits.
std::string format_double(double v);
void write_matrix_csv(std::ostream& os, const Matrix& M);
Matrix read_matrix_csv(std::istream& is);
std::string matrix_to_csv(const Matrix& M);
Matrix matrix_from_csv(const std::string& text);
void save_matrix_csv(const fs::path& path, const Matrix& M);
Matrix load_matrix_csv(const fs::path& path);

// 64-bit FNV-1a, hex encoded.
std::string content_hash(const std::string& bytes);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);

// A dataset directory holds manifest.json, X.csv and Y.csv.
struct Dataset {
  SnapshotPair data;
  json manifest;
  std::string manifest_hash;
};

void save_dataset(const fs::path& dir, const SnapshotPair& data, json manifest);
Dataset load_dataset(const fs::path& dir);

// Model files: a JSON document whose matrices are stored as CSV blocks.
enum class ModelKind { factored, reduced, spectral };
std::string to_string(ModelKind k);

struct ModelProvenance {
  std::string dataset_hash;
  std::string method;
  Index k = 0;
  double rank_tol = default_rank_tol;
};

json factored_to_json(const FactoredOperator& op, const ModelProvenance& prov);
json reduced_to_json(const ReducedModel& model, const ModelProvenance& prov);
json spectral_to_json(const SpectralModel& model, const ModelProvenance& prov);

ModelKind model_kind(const json& doc);
FactoredOperator factored_from_json(const json& doc);
ReducedModel reduced_from_json(const json& doc);
SpectralModel spectral_from_json(const json& doc);
ModelProvenance provenance_from_json(const json& doc);

void save_json(const fs::path& path, const json& doc);
json load_json(const fs::path& path);

// Trajectory output: one row per time step, n comma-separated values.
void write_trajectory_csv(std::ostream& os, const Matrix& states);
Matrix read_trajectory_csv(std::istream& is);

}  // namespace lrdmd

#endif
