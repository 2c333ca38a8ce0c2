/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "cpa/table_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <boost/crc.hpp>
#include "json.hpp"

#include "cpa/error.hpp"

namespace cpa {

namespace {

static_assert(std::endian::native == std::endian::little, "table files are little-endian");

constexpr char kMagic[4] = {'C', 'P', 'A', '1'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t crc32(const void* data, std::size_t size) {
  boost::crc_32_type crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

class Writer {
 public:
  template <class T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void put_raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  std::vector<char>& bytes() { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const std::vector<char>& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <class T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string get_string() {
    const auto len = get<std::uint32_t>();
    need(len);
    std::string s(bytes_.data() + pos_, len);
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (end_ - pos_ < n) throw FormatError("f0 table file is truncated");
  }

  const std::vector<char>& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(data, static_cast<std::streamsize>(size));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

PartitionPtr rebuild_partition(std::uint8_t kind, std::vector<std::vector<double>> breakpoints) {
  try {
    if (kind == static_cast<std::uint8_t>(Partition::Kind::Rectilinear)) {
      return std::make_shared<const Partition>(Partition::rectilinear(std::move(breakpoints)));
    }
    if (kind != static_cast<std::uint8_t>(Partition::Kind::Uniform)) {
      throw FormatError("unknown partition kind " + std::to_string(kind));
    }
    std::vector<double> lo, hi;
    std::vector<std::size_t> cells;
    for (const auto& b : breakpoints) {
      if (b.size() < 2) throw FormatError("partition dimension without cells");
      lo.push_back(b.front());
      hi.push_back(b.back());
      cells.push_back(b.size() - 1);
    }
    auto p = std::make_shared<const Partition>(Partition::uniform(Box(lo, hi), cells));
    if (p->breakpoints() != breakpoints) throw FormatError("uniform partition breakpoints are not equally spaced");
    return p;
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid partition in f0 table: ") + e.what());
  }
}

void check_declared(const Partition& partition, std::uint64_t declared, const Partition* expected) {
  if (declared != partition.symbol_count()) {
    throw FormatError("f0 table declares |E| = " + std::to_string(declared) + " but its partition has " +
                      std::to_string(partition.symbol_count()) + " cells");
  }
  if (expected && !(*expected == partition)) {
    throw FormatError("f0 table was built on a different partition than the configured one");
  }
}

LocalFunction assemble(PartitionPtr partition, Interval u, Interval v, LocalFunctionMeta meta,
                       std::uint64_t preimages, std::vector<std::pair<PatternCode, std::vector<ImageEntry>>> records) {
  const std::uint64_t expected_rows = pattern_space_size(partition->symbol_count(), (u + v).size());
  if (preimages != expected_rows || preimages > kMaxPreimages) {
    throw FormatError("f0 table row count " + std::to_string(preimages) + " does not match |E|^|U+V|");
  }
  std::vector<std::vector<ImageEntry>> rows(preimages);
  std::vector<bool> explored(preimages, false);
  for (auto& [code, row] : records) {
    if (code >= preimages || explored[code]) throw FormatError("f0 table has an invalid or repeated preimage record");
    explored[code] = true;
    rows[code] = std::move(row);
  }
  try {
    return LocalFunction(std::move(partition), u, v, TransitionTable(preimages, std::move(rows), std::move(explored)),
                         std::move(meta));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("inconsistent f0 table: ") + e.what());
  }
}

LocalFunction load_binary(const std::vector<char>& bytes, const Partition* expected) {
  if (bytes.size() < sizeof(kMagic) + 2 * sizeof(std::uint32_t)) throw FormatError("f0 table file is truncated");
  const std::size_t body = bytes.size() - sizeof(std::uint32_t);
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw FormatError("not an f0 table (bad magic)");
  if (crc32(bytes.data(), body) != stored) throw FormatError("f0 table checksum mismatch");

  Reader in(bytes, body);
  for (std::size_t k = 0; k < sizeof(kMagic); ++k) in.get<char>();
  if (const auto version = in.get<std::uint32_t>(); version != kVersion) {
    throw FormatError("unsupported f0 table version " + std::to_string(version));
  }
  const auto kind = in.get<std::uint8_t>();
  const auto n = in.get<std::uint32_t>();
  std::vector<std::vector<double>> breakpoints(n);
  for (auto& b : breakpoints) {
    b.resize(in.get<std::uint32_t>());
    for (double& x : b) x = in.get<double>();
  }
  PartitionPtr partition = rebuild_partition(kind, std::move(breakpoints));
  Interval u, v;
  u.lo = in.get<std::int32_t>();
  u.hi = in.get<std::int32_t>();
  v.lo = in.get<std::int32_t>();
  v.hi = in.get<std::int32_t>();
  LocalFunctionMeta meta;
  meta.tau = in.get<double>();
  meta.seed = in.get<std::uint64_t>();
  const auto mode = in.get<std::uint8_t>();
  if (mode > 1) throw FormatError("unknown sampling mode");
  meta.plan.mode = static_cast<SamplingPlan::Mode>(mode);
  meta.plan.counts.resize(in.get<std::uint32_t>());
  for (auto& c : meta.plan.counts) c = static_cast<std::size_t>(in.get<std::uint64_t>());
  meta.plan.joint_count = in.get<std::uint64_t>();
  meta.model = in.get_string();
  meta.image_values = in.get<std::uint64_t>();
  meta.clamped_values = in.get<std::uint64_t>();
  check_declared(*partition, in.get<std::uint64_t>(), expected);
  const auto preimages = in.get<std::uint64_t>();
  const auto count = in.get<std::uint64_t>();
  if (count > preimages) throw FormatError("f0 table lists more rows than preimages");
  std::vector<std::pair<PatternCode, std::vector<ImageEntry>>> records(count);
  for (auto& [code, row] : records) {
    code = in.get<std::uint64_t>();
    row.resize(in.get<std::uint32_t>());
    for (auto& e : row) {
      e.image = in.get<std::uint64_t>();
      e.probability = in.get<double>();
    }
  }
  if (!in.done()) throw FormatError("trailing bytes in f0 table");
  return assemble(std::move(partition), u, v, std::move(meta), preimages, std::move(records));
}

nlohmann::json to_json(const LocalFunction& f0) {
  using nlohmann::json;
  const auto& meta = f0.meta();
  json rows = json::array();
  const auto& table = f0.table();
  for (PatternCode c = 0; c < table.preimage_count(); ++c) {
    if (!table.explored(c)) continue;
    json images = json::array();
    for (const auto& e : table.row(c)) images.push_back({e.image, e.probability});
    rows.push_back({{"preimage", c}, {"images", std::move(images)}});
  }
  const auto& p = f0.partition();
  return json{
      {"format", "cpa-f0"},
      {"version", kVersion},
      {"partition",
       {{"kind", p.kind() == Partition::Kind::Uniform ? "uniform" : "rectilinear"},
        {"breakpoints", p.breakpoints()}}},
      {"U", {f0.neighborhood().lo, f0.neighborhood().hi}},
      {"V", {f0.pattern_window().lo, f0.pattern_window().hi}},
      {"tau", meta.tau},
      {"seed", meta.seed},
      {"sampling",
       {{"mode", meta.plan.mode == SamplingPlan::Mode::Joint ? "joint" : "product"},
        {"counts", meta.plan.counts},
        {"joint", meta.plan.joint_count}}},
      {"model", meta.model},
      {"image_values", meta.image_values},
      {"clamped_values", meta.clamped_values},
      {"symbols", p.symbol_count()},
      {"preimages", table.preimage_count()},
      {"rows", std::move(rows)},
  };
}

LocalFunction load_json(const std::vector<char>& bytes, const Partition* expected) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string("f0 table is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "cpa-f0") throw FormatError("not an f0 table (bad magic)");
    if (doc.at("version").get<std::uint32_t>() != kVersion) throw FormatError("unsupported f0 table version");
    const auto stored = doc.at("checksum").get<std::uint32_t>();
    doc.erase("checksum");
    const std::string canonical = doc.dump();
    if (crc32(canonical.data(), canonical.size()) != stored) throw FormatError("f0 table checksum mismatch");

    const auto& jp = doc.at("partition");
    const std::string kind = jp.at("kind").get<std::string>();
    if (kind != "uniform" && kind != "rectilinear") throw FormatError("unknown partition kind " + kind);
    PartitionPtr partition = rebuild_partition(
        static_cast<std::uint8_t>(kind == "uniform" ? Partition::Kind::Uniform : Partition::Kind::Rectilinear),
        jp.at("breakpoints").get<std::vector<std::vector<double>>>());
    const auto u = doc.at("U").get<std::array<int, 2>>();
    const auto v = doc.at("V").get<std::array<int, 2>>();
    LocalFunctionMeta meta;
    meta.tau = doc.at("tau").get<double>();
    meta.seed = doc.at("seed").get<std::uint64_t>();
    const auto& js = doc.at("sampling");
    const std::string mode = js.at("mode").get<std::string>();
    if (mode != "product" && mode != "joint") throw FormatError("unknown sampling mode " + mode);
    meta.plan.mode = mode == "joint" ? SamplingPlan::Mode::Joint : SamplingPlan::Mode::Product;
    meta.plan.counts = js.at("counts").get<std::vector<std::size_t>>();
    meta.plan.joint_count = js.at("joint").get<std::uint64_t>();
    meta.model = doc.at("model").get<std::string>();
    meta.image_values = doc.at("image_values").get<std::uint64_t>();
    meta.clamped_values = doc.at("clamped_values").get<std::uint64_t>();
    check_declared(*partition, doc.at("symbols").get<std::uint64_t>(), expected);
    std::vector<std::pair<PatternCode, std::vector<ImageEntry>>> records;
    for (const auto& r : doc.at("rows")) {
      std::vector<ImageEntry> row;
      for (const auto& e : r.at("images")) row.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<double>()});
      records.emplace_back(r.at("preimage").get<std::uint64_t>(), std::move(row));
    }
    return assemble(std::move(partition), {u[0], u[1]}, {v[0], v[1]}, std::move(meta),
                    doc.at("preimages").get<std::uint64_t>(), std::move(records));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed f0 table: ") + e.what());
  }
}

}  // namespace

void save_f0_binary(const LocalFunction& f0, const std::filesystem::path& path) {
  Writer out;
  out.put_raw(kMagic, sizeof(kMagic));
  out.put(kVersion);
  const auto& p = f0.partition();
  out.put(static_cast<std::uint8_t>(p.kind()));
  out.put(static_cast<std::uint32_t>(p.dimension()));
  for (const auto& b : p.breakpoints()) {
    out.put(static_cast<std::uint32_t>(b.size()));
    for (double x : b) out.put(x);
  }
  out.put(static_cast<std::int32_t>(f0.neighborhood().lo));
  out.put(static_cast<std::int32_t>(f0.neighborhood().hi));
  out.put(static_cast<std::int32_t>(f0.pattern_window().lo));
  out.put(static_cast<std::int32_t>(f0.pattern_window().hi));
  const auto& meta = f0.meta();
  out.put(meta.tau);
  out.put(meta.seed);
  out.put(static_cast<std::uint8_t>(meta.plan.mode));
  out.put(static_cast<std::uint32_t>(meta.plan.counts.size()));
  for (std::size_t c : meta.plan.counts) out.put(static_cast<std::uint64_t>(c));
  out.put(meta.plan.joint_count);
  out.put_string(meta.model);
  out.put(meta.image_values);
  out.put(meta.clamped_values);
  out.put(static_cast<std::uint64_t>(p.symbol_count()));
  const auto& table = f0.table();
  out.put(table.preimage_count());
  out.put(static_cast<std::uint64_t>(table.explored_count()));
  for (PatternCode c = 0; c < table.preimage_count(); ++c) {
    if (!table.explored(c)) continue;
    const auto row = table.row(c);
    out.put(c);
    out.put(static_cast<std::uint32_t>(row.size()));
    for (const auto& e : row) {
      out.put(e.image);
      out.put(e.probability);
    }
  }
  out.put(crc32(out.bytes().data(), out.bytes().size()));
  write_file(path, out.bytes().data(), out.bytes().size());
}

void save_f0_json(const LocalFunction& f0, const std::filesystem::path& path) {
  nlohmann::json doc = to_json(f0);
  const std::string canonical = doc.dump();
  doc["checksum"] = crc32(canonical.data(), canonical.size());
  const std::string text = doc.dump(1) + "\n";
  write_file(path, text.data(), text.size());
}

void save_f0(const LocalFunction& f0, const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    save_f0_json(f0, path);
  } else {
    save_f0_binary(f0, path);
  }
}

LocalFunction load_f0(const std::filesystem::path& path, const Partition* expected) {
  const std::vector<char> bytes = read_file(path);
  std::size_t first = 0;
  while (first < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[first]))) ++first;
  if (first < bytes.size() && bytes[first] == '{') return load_json(bytes, expected);
  return load_binary(bytes, expected);
}

}  // namespace cpa
