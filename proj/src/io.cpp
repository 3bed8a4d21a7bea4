#include "uvlce/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "uvlce/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace uvlce {

std::string fmt_double(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw IoError("cannot parse number '" + text + "'");
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

using KeyValues = std::map<std::string, std::string>;

// reads '# ...' comments and key=value lines until a non-matching line; that
// line (usually the CSV header) is handed back to the caller
KeyValues read_keyvalues(std::istream& in, std::string* stopped_at = nullptr) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') t = trim(t.substr(1));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      if (stopped_at) *stopped_at = t;
      return kv;
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

double get_d(const KeyValues& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_double(it->second);
}

std::uint64_t get_u64(const KeyValues& kv, const std::string& key, std::uint64_t fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::uint64_t v = 0;
  const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (res.ec != std::errc()) throw IoError("cannot parse integer for key '" + key + "'");
  return v;
}

int get_i(const KeyValues& kv, const std::string& key, int fallback) {
  return static_cast<int>(get_u64(kv, key, static_cast<std::uint64_t>(fallback)));
}

const char* const kConfigKeys[] = {
    "c1",       "c2",        "f_min",         "f_max",          "pilot_count",
    "delta_s",  "s_max",     "path_count",    "alpha_los_min",  "alpha_los_max",
    "alpha_nlos_min", "alpha_nlos_max", "off_grid", "snr_db",   "seed",
    "train_size", "test_size", "learning_rate", "adam_beta1",   "adam_beta2",
    "adam_epsilon", "epochs_per_layer", "batch_size", "max_layers", "snapshot_every",
    "stop_metric"};

SystemConfig config_from(const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const char* k : kConfigKeys) known |= key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  SystemConfig cfg = default_config();
  cfg.attenuation.c1 = get_d(kv, "c1", cfg.attenuation.c1);
  cfg.attenuation.c2 = get_d(kv, "c2", cfg.attenuation.c2);
  cfg.pilots.f_min = get_d(kv, "f_min", cfg.pilots.f_min);
  cfg.pilots.f_max = get_d(kv, "f_max", cfg.pilots.f_max);
  cfg.pilots.count = get_i(kv, "pilot_count", cfg.pilots.count);
  cfg.grid.step = get_d(kv, "delta_s", cfg.grid.step);
  cfg.grid.s_max = get_d(kv, "s_max", cfg.grid.s_max);
  cfg.gen.path_count = get_i(kv, "path_count", cfg.gen.path_count);
  cfg.gen.alpha_los_min = get_d(kv, "alpha_los_min", cfg.gen.alpha_los_min);
  cfg.gen.alpha_los_max = get_d(kv, "alpha_los_max", cfg.gen.alpha_los_max);
  cfg.gen.alpha_nlos_min = get_d(kv, "alpha_nlos_min", cfg.gen.alpha_nlos_min);
  cfg.gen.alpha_nlos_max = get_d(kv, "alpha_nlos_max", cfg.gen.alpha_nlos_max);
  cfg.gen.off_grid = get_i(kv, "off_grid", cfg.gen.off_grid ? 1 : 0) != 0;
  cfg.noise.snr_db = get_d(kv, "snr_db", cfg.noise.snr_db);
  cfg.seed = get_u64(kv, "seed", cfg.seed);
  cfg.train.train_size = get_i(kv, "train_size", cfg.train.train_size);
  cfg.train.test_size = get_i(kv, "test_size", cfg.train.test_size);
  cfg.train.adam.learning_rate = get_d(kv, "learning_rate", cfg.train.adam.learning_rate);
  cfg.train.adam.beta1 = get_d(kv, "adam_beta1", cfg.train.adam.beta1);
  cfg.train.adam.beta2 = get_d(kv, "adam_beta2", cfg.train.adam.beta2);
  cfg.train.adam.epsilon = get_d(kv, "adam_epsilon", cfg.train.adam.epsilon);
  cfg.train.epochs_per_layer = get_i(kv, "epochs_per_layer", cfg.train.epochs_per_layer);
  cfg.train.batch_size = get_i(kv, "batch_size", cfg.train.batch_size);
  cfg.train.max_layers = get_i(kv, "max_layers", cfg.train.max_layers);
  cfg.train.snapshot_every = get_i(kv, "snapshot_every", cfg.train.snapshot_every);
  if (const auto it = kv.find("stop_metric"); it != kv.end()) {
    if (it->second == "train")
      cfg.train.stop_metric = StopMetric::train_loss;
    else if (it->second == "holdout")
      cfg.train.stop_metric = StopMetric::holdout_loss;
    else
      throw ConfigError("stop_metric must be 'train' or 'holdout'");
  }
  return cfg;
}

void write_config_body(const SystemConfig& cfg, std::ostream& out, const char* prefix) {
  auto put = [&](const char* key, const std::string& value) {
    out << prefix << key << '=' << value << '\n';
  };
  put("c1", fmt_double(cfg.attenuation.c1));
  put("c2", fmt_double(cfg.attenuation.c2));
  put("f_min", fmt_double(cfg.pilots.f_min));
  put("f_max", fmt_double(cfg.pilots.f_max));
  put("pilot_count", std::to_string(cfg.pilots.count));
  put("delta_s", fmt_double(cfg.grid.step));
  put("s_max", fmt_double(cfg.grid.s_max));
  put("path_count", std::to_string(cfg.gen.path_count));
  put("alpha_los_min", fmt_double(cfg.gen.alpha_los_min));
  put("alpha_los_max", fmt_double(cfg.gen.alpha_los_max));
  put("alpha_nlos_min", fmt_double(cfg.gen.alpha_nlos_min));
  put("alpha_nlos_max", fmt_double(cfg.gen.alpha_nlos_max));
  put("off_grid", cfg.gen.off_grid ? "1" : "0");
  put("snr_db", fmt_double(cfg.noise.snr_db));
  put("seed", std::to_string(cfg.seed));
  put("train_size", std::to_string(cfg.train.train_size));
  put("test_size", std::to_string(cfg.train.test_size));
  put("learning_rate", fmt_double(cfg.train.adam.learning_rate));
  put("adam_beta1", fmt_double(cfg.train.adam.beta1));
  put("adam_beta2", fmt_double(cfg.train.adam.beta2));
  put("adam_epsilon", fmt_double(cfg.train.adam.epsilon));
  put("epochs_per_layer", std::to_string(cfg.train.epochs_per_layer));
  put("batch_size", std::to_string(cfg.train.batch_size));
  put("max_layers", std::to_string(cfg.train.max_layers));
  put("snapshot_every", std::to_string(cfg.train.snapshot_every));
  put("stop_metric", cfg.train.stop_metric == StopMetric::train_loss ? "train" : "holdout");
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream f(path, mode);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return f;
}

std::vector<double> parse_csv_row(const std::string& line, int expected) {
  std::vector<double> row;
  row.reserve(expected);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto comma = line.find(',', pos);
    const std::string cell =
        comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
    row.push_back(parse_double(trim(cell)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (expected >= 0 && static_cast<int>(row.size()) != expected)
    throw IoError("expected " + std::to_string(expected) + " values per row, got " +
                  std::to_string(row.size()));
  return row;
}

void write_provenance(const DatasetProvenance& p, std::ostream& out) {
  auto put = [&](const char* key, const std::string& value) {
    out << "# " << key << '=' << value << '\n';
  };
  put("c1", fmt_double(p.matrix.c1));
  put("c2", fmt_double(p.matrix.c2));
  put("f_min", fmt_double(p.matrix.f_min));
  put("f_max", fmt_double(p.matrix.f_max));
  put("pilot_count", std::to_string(p.matrix.pilot_count));
  put("delta_s", fmt_double(p.matrix.step));
  put("s_max", fmt_double(p.matrix.s_max));
  put("snr_db", fmt_double(p.snr_db));
  put("path_count", std::to_string(p.gen.path_count));
  put("alpha_los_min", fmt_double(p.gen.alpha_los_min));
  put("alpha_los_max", fmt_double(p.gen.alpha_los_max));
  put("alpha_nlos_min", fmt_double(p.gen.alpha_nlos_min));
  put("alpha_nlos_max", fmt_double(p.gen.alpha_nlos_max));
  put("off_grid", p.gen.off_grid ? "1" : "0");
  put("seed", std::to_string(p.seed));
}

DatasetProvenance provenance_from(const KeyValues& kv) {
  DatasetProvenance p;
  p.matrix.c1 = get_d(kv, "c1", 0.0);
  p.matrix.c2 = get_d(kv, "c2", 0.0);
  p.matrix.f_min = get_d(kv, "f_min", 0.0);
  p.matrix.f_max = get_d(kv, "f_max", 0.0);
  p.matrix.pilot_count = get_i(kv, "pilot_count", 0);
  p.matrix.step = get_d(kv, "delta_s", 0.0);
  p.matrix.s_max = get_d(kv, "s_max", 0.0);
  p.snr_db = get_d(kv, "snr_db", 0.0);
  p.gen.path_count = get_i(kv, "path_count", 0);
  p.gen.alpha_los_min = get_d(kv, "alpha_los_min", 0.0);
  p.gen.alpha_los_max = get_d(kv, "alpha_los_max", 0.0);
  p.gen.alpha_nlos_min = get_d(kv, "alpha_nlos_min", 0.0);
  p.gen.alpha_nlos_max = get_d(kv, "alpha_nlos_max", 0.0);
  p.gen.off_grid = get_i(kv, "off_grid", 0) != 0;
  p.seed = get_u64(kv, "seed", 0);
  return p;
}

}  // namespace

SystemConfig read_config(std::istream& in) { return config_from(read_keyvalues(in)); }

SystemConfig read_config_file(const std::string& path) {
  auto f = open_in(path);
  return read_config(f);
}

void write_config(const SystemConfig& cfg, std::ostream& out) {
  out << "# uvlce config\n";
  write_config_body(cfg, out, "");
}

void write_config_file(const SystemConfig& cfg, const std::string& path) {
  auto f = open_out(path);
  write_config(cfg, f);
  if (!f) throw IoError("failed writing '" + path + "'");
}

void write_dataset(const Dataset& ds, std::ostream& out) {
  out << "# uvlce-dataset v1\n";
  write_provenance(ds.provenance, out);
  const int p = ds.provenance.matrix.pilot_count;
  const int n = static_cast<int>(ds.x.empty() ? 0 : ds.x[0].size());
  out << "# samples=" << ds.size() << '\n';
  for (int i = 0; i < p; ++i) out << 'y' << i << ',';
  for (int k = 0; k < n; ++k) out << 'x' << k << (k + 1 < n ? "," : "");
  out << '\n';
  for (int s = 0; s < ds.size(); ++s) {
    for (int i = 0; i < p; ++i) out << fmt_double(ds.y[s][i]) << ',';
    for (int k = 0; k < n; ++k) out << fmt_double(ds.x[s][k]) << (k + 1 < n ? "," : "");
    out << '\n';
  }
}

void write_dataset_file(const Dataset& ds, const std::string& path) {
  auto f = open_out(path);
  write_dataset(ds, f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

Dataset read_dataset(std::istream& in) {
  std::string header;
  const KeyValues kv = read_keyvalues(in, &header);
  Dataset ds;
  ds.provenance = provenance_from(kv);
  const int p = ds.provenance.matrix.pilot_count;
  if (p < 2) throw IoError("dataset header is missing pilot_count");
  const int n = ds.provenance.matrix.distance_grid().size();
  const int samples = get_i(kv, "samples", -1);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row = parse_csv_row(line, p + n);
    ds.y.emplace_back(row.begin(), row.begin() + p);
    ds.x.emplace_back(row.begin() + p, row.end());
  }
  if (samples >= 0 && samples != ds.size())
    throw IoError("dataset declares " + std::to_string(samples) + " samples but has " +
                  std::to_string(ds.size()));
  return ds;
}

Dataset read_dataset_file(const std::string& path) {
  auto f = open_in(path);
  return read_dataset(f);
}

void write_measurement(const Measurement& m, std::ostream& out) {
  out << "# uvlce-measurement v1\n";
  DatasetProvenance p;
  p.matrix = m.provenance;
  write_provenance(p, out);
  const int n = static_cast<int>(m.y.size());
  for (int i = 0; i < n; ++i) out << 'y' << i << (i + 1 < n ? "," : "");
  out << '\n';
  for (int i = 0; i < n; ++i) out << fmt_double(m.y[i]) << (i + 1 < n ? "," : "");
  out << '\n';
}

void write_measurement_file(const Measurement& m, const std::string& path) {
  auto f = open_out(path);
  write_measurement(m, f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

Measurement read_measurement(std::istream& in) {
  std::string header;
  const KeyValues kv = read_keyvalues(in, &header);
  Measurement m;
  m.provenance = provenance_from(kv).matrix;
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  m.y = parse_csv_row(line, m.provenance.pilot_count);
  return m;
}

Measurement read_measurement_file(const std::string& path) {
  auto f = open_in(path);
  return read_measurement(f);
}

void write_estimate(const Estimate& e, std::ostream& out) {
  out << "# uvlce-estimate v1\n";
  out << "# scheme=" << e.scheme << '\n';
  DatasetProvenance p;
  p.matrix = e.provenance;
  write_provenance(p, out);
  const int n = static_cast<int>(e.x_hat.size());
  for (int k = 0; k < n; ++k) out << 'x' << k << (k + 1 < n ? "," : "");
  out << '\n';
  for (int k = 0; k < n; ++k) out << fmt_double(e.x_hat[k]) << (k + 1 < n ? "," : "");
  out << '\n';
  out << "path,distance,alpha\n";
  for (std::size_t i = 0; i < e.paths.paths.size(); ++i)
    out << i << ',' << fmt_double(e.paths.paths[i].distance) << ','
        << fmt_double(e.paths.paths[i].alpha) << '\n';
}

void write_estimate_file(const Estimate& e, const std::string& path) {
  auto f = open_out(path);
  write_estimate(e, f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

namespace {

template <typename T>
void put_raw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get_raw(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("unexpected end of checkpoint file");
  return v;
}

constexpr char kCheckpointMagic[8] = {'U', 'V', 'L', 'C', 'K', 'P', 'T', '1'};

}  // namespace

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  auto f = open_out(path, std::ios::out | std::ios::binary);
  f.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_raw<std::uint32_t>(f, 1);  // version
  const MatrixProvenance& mp = c.params.provenance;
  put_raw(f, mp.c1);
  put_raw(f, mp.c2);
  put_raw(f, mp.f_min);
  put_raw(f, mp.f_max);
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(mp.pilot_count));
  put_raw(f, mp.step);
  put_raw(f, mp.s_max);
  const TrainConfig& tc = c.train;
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.train_size));
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.test_size));
  put_raw(f, tc.adam.learning_rate);
  put_raw(f, tc.adam.beta1);
  put_raw(f, tc.adam.beta2);
  put_raw(f, tc.adam.epsilon);
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.epochs_per_layer));
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.batch_size));
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.max_layers));
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(tc.snapshot_every));
  put_raw<std::uint32_t>(f, tc.stop_metric == StopMetric::train_loss ? 0u : 1u);
  put_raw<std::uint64_t>(f, tc.seed);
  put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(c.params.depth()));
  for (const LampLayer& layer : c.params.layers) {
    put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(layer.b.rows()));
    put_raw<std::uint32_t>(f, static_cast<std::uint32_t>(layer.b.cols()));
    f.write(reinterpret_cast<const char*>(layer.b.data()),
            static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    put_raw(f, layer.zeta);
  }
  f.flush();
  if (!f) throw IoError("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  auto f = open_in(path, std::ios::in | std::ios::binary);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw IoError("'" + path + "' is not a checkpoint file");
  const auto version = get_raw<std::uint32_t>(f);
  if (version != 1) throw IoError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  MatrixProvenance& mp = c.params.provenance;
  mp.c1 = get_raw<double>(f);
  mp.c2 = get_raw<double>(f);
  mp.f_min = get_raw<double>(f);
  mp.f_max = get_raw<double>(f);
  mp.pilot_count = static_cast<int>(get_raw<std::uint32_t>(f));
  mp.step = get_raw<double>(f);
  mp.s_max = get_raw<double>(f);
  TrainConfig& tc = c.train;
  tc.train_size = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.test_size = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.adam.learning_rate = get_raw<double>(f);
  tc.adam.beta1 = get_raw<double>(f);
  tc.adam.beta2 = get_raw<double>(f);
  tc.adam.epsilon = get_raw<double>(f);
  tc.epochs_per_layer = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.batch_size = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.max_layers = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.snapshot_every = static_cast<int>(get_raw<std::uint32_t>(f));
  tc.stop_metric = get_raw<std::uint32_t>(f) == 0 ? StopMetric::train_loss : StopMetric::holdout_loss;
  tc.seed = get_raw<std::uint64_t>(f);
  const auto depth = get_raw<std::uint32_t>(f);
  for (std::uint32_t t = 0; t < depth; ++t) {
    const auto rows = static_cast<int>(get_raw<std::uint32_t>(f));
    const auto cols = static_cast<int>(get_raw<std::uint32_t>(f));
    LampLayer layer;
    layer.b = Matrix(rows, cols);
    f.read(reinterpret_cast<char*>(layer.b.data()),
           static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    if (!f) throw IoError("unexpected end of checkpoint file");
    layer.zeta = get_raw<double>(f);
    c.params.layers.push_back(std::move(layer));
  }
  return c;
}

void write_training_log_header(std::ostream& out) { out << "layer,epoch,train_loss,test_nmse\n"; }

void write_training_log_row(std::ostream& out, int layer, int epoch, double train_loss,
                            double test_nmse) {
  out << layer << ',' << epoch << ',' << fmt_double(train_loss, 9) << ','
      << fmt_double(test_nmse, 9) << '\n';
}

}  // namespace uvlce
