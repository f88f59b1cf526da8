#include "nemflow/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nemflow/version.hpp"

namespace nemflow {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts need swapping");

namespace {

constexpr char kMagicSnapshot[8] = {'N', 'E', 'M', 'F', 'S', 'N', 'A', 'P'};
constexpr char kMagicCheckpoint[8] = {'N', 'E', 'M', 'F', 'C', 'H', 'K', 'P'};
constexpr char kMagicBasis[8] = {'N', 'E', 'M', 'F', 'B', 'A', 'S', 'E'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is, const char* what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error(std::string("truncated file while reading ") + what);
  return v;
}

void put_doubles(std::ostream& os, const double* p, std::size_t n) {
  os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::istream& is, double* p, std::size_t n, const char* what) {
  is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw std::runtime_error(std::string("truncated file while reading ") + what);
}

void write_header(std::ostream& os, const char magic[8], std::uint64_t hash) {
  char block[64] = {};
  std::memcpy(block, magic, 8);
  const std::uint32_t version = kFileFormatVersion;
  std::memcpy(block + 8, &version, 4);
  std::memcpy(block + 16, &hash, 8);
  std::strncpy(block + 24, kVersion, 31);
  os.write(block, sizeof block);
}

// returns true for a checkpoint magic, false for a snapshot
bool read_header(std::istream& is, SnapshotInfo& info, const char* expect) {
  char block[64];
  is.read(block, sizeof block);
  if (!is) throw std::runtime_error("file too short for a header");
  bool checkpoint = false;
  if (std::memcmp(block, kMagicSnapshot, 8) == 0) {
    checkpoint = false;
  } else if (std::memcmp(block, kMagicCheckpoint, 8) == 0) {
    checkpoint = true;
  } else {
    throw std::runtime_error(expect ? std::string("not a ") + expect + " file"
                                    : std::string("not a field file"));
  }
  std::uint32_t version = 0;
  std::memcpy(&version, block + 8, 4);
  if (version != kFileFormatVersion)
    throw std::runtime_error("file format version " + std::to_string(version) +
                             " does not match expected " +
                             std::to_string(kFileFormatVersion));
  std::memcpy(&info.config_hash, block + 16, 8);
  char ver[33] = {};
  std::memcpy(ver, block + 24, 32);
  info.code_version = ver;
  info.version = version;
  info.is_checkpoint = checkpoint;
  return checkpoint;
}

void write_grid(std::ostream& os, const Grid& g) {
  put<std::int32_t>(os, g.dim);
  for (int a = 0; a < 3; ++a) put<std::int32_t>(os, g.extents[a]);
  for (int a = 0; a < 3; ++a) put(os, g.spacing[a]);
  for (int a = 0; a < 3; ++a) put(os, g.origin[a]);
  for (int a = 0; a < 3; ++a)
    put<std::uint8_t>(os, g.bc[a] == AxisBc::Wall ? 1 : 0);
  put<std::uint8_t>(os, 0);  // pad
}

Grid read_grid(std::istream& is) {
  Grid g;
  g.dim = get<std::int32_t>(is, "grid");
  if (g.dim < 1 || g.dim > 3) throw std::runtime_error("grid dimension out of range");
  for (int a = 0; a < 3; ++a) g.extents[a] = get<std::int32_t>(is, "grid");
  for (int a = 0; a < 3; ++a) g.spacing[a] = get<double>(is, "grid");
  for (int a = 0; a < 3; ++a) g.origin[a] = get<double>(is, "grid");
  for (int a = 0; a < 3; ++a)
    g.bc[a] = get<std::uint8_t>(is, "grid") ? AxisBc::Wall : AxisBc::Periodic;
  get<std::uint8_t>(is, "grid");
  for (int a = 0; a < g.dim; ++a)
    if (g.extents[a] < 4 || !(g.spacing[a] > 0.0))
      throw std::runtime_error("grid block is corrupt");
  return g;
}

void write_state(std::ostream& os, const State& s) {
  write_grid(os, s.rho.grid);
  put(os, s.t);
  put<std::int64_t>(os, s.step_index);
  put_doubles(os, s.rho.data(), s.rho.size());
  for (int c = 0; c < s.rho.grid.dim; ++c)
    put_doubles(os, s.u.data(c), s.u.size());
  for (int c = 0; c < 3; ++c) put_doubles(os, s.d.data(c), s.d.size());
}

State read_state(std::istream& is) {
  State s;
  const Grid g = read_grid(is);
  s.t = get<double>(is, "time");
  s.step_index = static_cast<long>(get<std::int64_t>(is, "step index"));
  s.rho = ScalarField(g);
  s.u = VectorField(g);
  s.d = DirectorField(g);
  get_doubles(is, s.rho.data(), s.rho.size(), "density");
  for (int c = 0; c < g.dim; ++c)
    get_doubles(is, s.u.data(c), s.u.size(), "velocity");
  for (int c = 0; c < 3; ++c) get_doubles(is, s.d.data(c), s.d.size(), "director");
  return s;
}

void put_vec(std::ostream& os, const std::vector<double>& v) {
  put<std::uint64_t>(os, v.size());
  put_doubles(os, v.data(), v.size());
}

std::vector<double> get_vec(std::istream& is, const char* what) {
  const std::uint64_t n = get<std::uint64_t>(is, what);
  if (n > (1ull << 32)) throw std::runtime_error("checkpoint array too large");
  std::vector<double> v(n);
  get_doubles(is, v.data(), v.size(), what);
  return v;
}

double director_norm_defect(const DirectorField& d) {
  double defect = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double m = std::sqrt(d.comp[0][i] * d.comp[0][i] +
                               d.comp[1][i] * d.comp[1][i] +
                               d.comp[2][i] * d.comp[2][i]);
    defect = std::fmax(defect, std::fabs(m - 1.0));
  }
  return defect;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return is;
}

}  // namespace

void write_snapshot(const std::string& path, const State& s,
                    std::uint64_t config_hash) {
  std::ofstream os = open_out(path);
  write_header(os, kMagicSnapshot, config_hash);
  write_state(os, s);
  if (!os) throw std::runtime_error("write failed on " + path);
}

State read_snapshot(const std::string& path, SnapshotInfo* info,
                    double* director_defect) {
  std::ifstream is = open_in(path);
  SnapshotInfo local;
  read_header(is, local, "snapshot");
  State s = read_state(is);
  local.grid = s.rho.grid;
  local.t = s.t;
  local.step_index = s.step_index;
  if (info) *info = local;
  if (director_defect) *director_defect = director_norm_defect(s.d);
  return s;
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream os = open_out(path);
  write_header(os, kMagicCheckpoint, c.config_hash);
  write_state(os, c.state);

  const RunProgress& p = c.progress;
  const double scalars[] = {p.acc.int_grad_d_cubed, p.acc.int_grad_d_squared,
                            p.acc.int_def_tensor,   p.acc.int_grad_u,
                            p.acc.last_t,           p.acc.last_grad_d,
                            p.acc.last_def,         p.acc.last_grad_u,
                            p.phi_sup,              p.peak_rho,
                            p.peak_grad_d,          p.peak_def,
                            p.peak_grad_u,          p.max_energy_residual,
                            p.max_unit_drift,       p.max_vacuum_residual,
                            p.max_mass_drift,       p.mass0,
                            p.energy0,              p.initial_director_defect};
  put_doubles(os, scalars, sizeof scalars / sizeof scalars[0]);
  put<std::uint8_t>(os, p.acc.has_sample ? 1 : 0);
  put<std::int64_t>(os, p.rows_written);
  put_vec(os, p.hist_t);
  put_vec(os, p.hist_min_rho);
  put_vec(os, p.hist_grad_u);
  put_vec(os, p.galerkin_coeffs);
  put<std::uint64_t>(os, c.canonical_config.size());
  os.write(c.canonical_config.data(),
           static_cast<std::streamsize>(c.canonical_config.size()));
  if (!os) throw std::runtime_error("write failed on " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is = open_in(path);
  SnapshotInfo info;
  if (!read_header(is, info, "checkpoint"))
    throw std::runtime_error(path + " is a snapshot, not a checkpoint");
  Checkpoint c;
  c.config_hash = info.config_hash;
  c.state = read_state(is);

  double scalars[20];
  get_doubles(is, scalars, 20, "progress");
  RunProgress& p = c.progress;
  p.acc.int_grad_d_cubed = scalars[0];
  p.acc.int_grad_d_squared = scalars[1];
  p.acc.int_def_tensor = scalars[2];
  p.acc.int_grad_u = scalars[3];
  p.acc.last_t = scalars[4];
  p.acc.last_grad_d = scalars[5];
  p.acc.last_def = scalars[6];
  p.acc.last_grad_u = scalars[7];
  p.phi_sup = scalars[8];
  p.peak_rho = scalars[9];
  p.peak_grad_d = scalars[10];
  p.peak_def = scalars[11];
  p.peak_grad_u = scalars[12];
  p.max_energy_residual = scalars[13];
  p.max_unit_drift = scalars[14];
  p.max_vacuum_residual = scalars[15];
  p.max_mass_drift = scalars[16];
  p.mass0 = scalars[17];
  p.energy0 = scalars[18];
  p.initial_director_defect = scalars[19];
  p.acc.has_sample = get<std::uint8_t>(is, "progress") != 0;
  p.rows_written = static_cast<long>(get<std::int64_t>(is, "progress"));
  p.hist_t = get_vec(is, "history");
  p.hist_min_rho = get_vec(is, "history");
  p.hist_grad_u = get_vec(is, "history");
  p.galerkin_coeffs = get_vec(is, "coefficients");
  const std::uint64_t clen = get<std::uint64_t>(is, "config");
  if (clen > (1ull << 24)) throw std::runtime_error("checkpoint config block too large");
  c.canonical_config.resize(clen);
  is.read(c.canonical_config.data(), static_cast<std::streamsize>(clen));
  if (!is) throw std::runtime_error("truncated file while reading config");
  return c;
}

SnapshotInfo inspect_file(const std::string& path) {
  std::ifstream is = open_in(path);
  SnapshotInfo info;
  read_header(is, info, nullptr);
  info.grid = read_grid(is);
  info.t = get<double>(is, "time");
  info.step_index = static_cast<long>(get<std::int64_t>(is, "step index"));
  return info;
}

std::uint64_t basis_cache_key(const LameParams& p, const Grid& g, VelocityBc bc,
                              int m) {
  // exact bit patterns so the key never aliases across nearby reals
  std::string s;
  auto bits = [&s](double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>(u >> (8 * i)));
  };
  s.push_back(static_cast<char>(g.dim));
  for (int a = 0; a < 3; ++a) {
    s.push_back(static_cast<char>(g.extents[a] & 0xff));
    s.push_back(static_cast<char>((g.extents[a] >> 8) & 0xff));
    s.push_back(g.bc[a] == AxisBc::Wall ? 'w' : 'p');
    bits(g.spacing[a]);
    bits(g.origin[a]);
  }
  bits(p.mu);
  bits(p.lambda);
  s.push_back(static_cast<char>(static_cast<int>(bc)));
  s.push_back(static_cast<char>(m & 0xff));
  s.push_back(static_cast<char>((m >> 8) & 0xff));
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_basis(const std::string& path, const EigenBasis& basis,
                 std::uint64_t key) {
  std::ofstream os = open_out(path);
  char block[64] = {};
  std::memcpy(block, kMagicBasis, 8);
  const std::uint32_t version = kFileFormatVersion;
  std::memcpy(block + 8, &version, 4);
  std::memcpy(block + 16, &key, 8);
  std::strncpy(block + 24, kVersion, 31);
  os.write(block, sizeof block);

  write_grid(os, basis.grid);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(static_cast<int>(basis.bc)));
  put<std::uint8_t>(os, basis.analytic ? 1 : 0);
  put(os, basis.params.mu);
  put(os, basis.params.lambda);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(basis.modes.size()));
  for (const auto& mode : basis.modes) {
    put(os, mode.eigenvalue);
    for (int c = 0; c < basis.grid.dim; ++c)
      put_doubles(os, mode.phi.data(c), mode.phi.size());
  }
  if (!os) throw std::runtime_error("write failed on " + path);
}

std::optional<EigenBasis> read_basis(const std::string& path,
                                     std::uint64_t expect_key) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char block[64];
  is.read(block, sizeof block);
  if (!is || std::memcmp(block, kMagicBasis, 8) != 0) return std::nullopt;
  std::uint32_t version = 0;
  std::memcpy(&version, block + 8, 4);
  std::uint64_t key = 0;
  std::memcpy(&key, block + 16, 8);
  if (version != kFileFormatVersion || key != expect_key) return std::nullopt;

  EigenBasis basis;
  basis.grid = read_grid(is);
  basis.bc = static_cast<VelocityBc>(get<std::uint8_t>(is, "basis"));
  basis.analytic = get<std::uint8_t>(is, "basis") != 0;
  basis.params.mu = get<double>(is, "basis");
  basis.params.lambda = get<double>(is, "basis");
  const std::uint32_t m = get<std::uint32_t>(is, "basis");
  if (m > 65536) return std::nullopt;
  basis.modes.resize(m);
  for (auto& mode : basis.modes) {
    mode.eigenvalue = get<double>(is, "mode");
    mode.phi = VectorField(basis.grid);
    for (int c = 0; c < basis.grid.dim; ++c)
      get_doubles(is, mode.phi.data(c), mode.phi.size(), "mode");
  }
  return basis;
}

}  // namespace nemflow
