#include "ebprior/core/io.hpp"

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::core {

namespace {

std::size_t count_indexed(const CsvTable& t, std::string_view prefix) {
  std::size_t n = 0;
  while (t.column(fmt::format("{}{}", prefix, n))) ++n;
  return n;
}

bool parse_mask(std::string_view field, std::string_view what) {
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  throw ValidationError(fmt::format("{}: mask value '{}' is not 0/1", what, field));
}

}  // namespace

MeasurementSet measurements_from_csv(const CsvTable& t) {
  const auto id_col = t.require_column("id");
  const auto group_col = t.column("group");
  const std::size_t n = count_indexed(t, "z_");
  if (n == 0) throw ValidationError("measurement CSV: no z_0 column");
  const std::size_t n_mask = count_indexed(t, "mask_");
  if (n_mask != 0 && n_mask != n) {
    throw ValidationError(fmt::format("measurement CSV: {} mask columns for {} coordinates", n_mask, n));
  }
  std::vector<std::size_t> z_cols(n), mask_cols(n_mask);
  for (std::size_t i = 0; i < n; ++i) z_cols[i] = *t.column(fmt::format("z_{}", i));
  for (std::size_t i = 0; i < n_mask; ++i) mask_cols[i] = *t.column(fmt::format("mask_{}", i));

  std::vector<Measurement> records;
  records.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Measurement rec;
    rec.id = row[id_col];
    if (rec.id.empty()) throw ValidationError("measurement CSV: empty id");
    if (group_col && !row[*group_col].empty()) rec.group = row[*group_col];
    rec.mask.assign(n, true);
    for (std::size_t i = 0; i < n_mask; ++i) rec.mask[i] = parse_mask(row[mask_cols[i]], rec.id);
    rec.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& f = row[z_cols[i]];
      if (!rec.mask[i] && f.empty()) {
        rec.z[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        rec.z[i] = parse_real(f, fmt::format("measurement '{}' z_{}", rec.id, i));
      }
    }
    records.push_back(std::move(rec));
  }
  return MeasurementSet(std::move(records));
}

MeasurementSet read_measurements(const std::filesystem::path& path) { return measurements_from_csv(read_csv(path)); }

std::string measurements_to_csv(const MeasurementSet& data) {
  const std::size_t n = data.dim();
  const bool masked = data.any_masked();
  std::string out = "id,group";
  for (std::size_t i = 0; i < n; ++i) out += fmt::format(",z_{}", i);
  if (masked) {
    for (std::size_t i = 0; i < n; ++i) out += fmt::format(",mask_{}", i);
  }
  out += '\n';
  for (const auto& r : data.records()) {
    out += r.id;
    out += ',';
    out += r.group.value_or("");
    for (std::size_t i = 0; i < n; ++i) {
      out += ',';
      if (r.mask[i]) out += format_real(r.z[i]);
    }
    if (masked) {
      for (std::size_t i = 0; i < n; ++i) out += r.mask[i] ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

WeightedAtoms weighted_atoms_from_csv(const CsvTable& t) {
  const std::size_t d = count_indexed(t, "x_");
  if (d == 0) throw ValidationError("atom CSV: no x_0 column");
  if (t.rows.empty()) throw ValidationError("atom CSV: no atoms");
  const auto w_col = t.column("w");
  std::vector<double> coords;
  coords.reserve(t.rows.size() * d);
  std::vector<double> w;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      coords.push_back(parse_real(t.rows[r][*t.column(fmt::format("x_{}", i))], fmt::format("atom {} x_{}", r, i)));
    }
    if (w_col) w.push_back(parse_real(t.rows[r][*w_col], fmt::format("atom {} w", r)));
  }
  WeightedAtoms out{AtomSet(d, std::move(coords), AtomProvenance::file), std::nullopt};
  if (w_col) out.weights = WeightVector(std::move(w));
  return out;
}

WeightedAtoms read_weighted_atoms(const std::filesystem::path& path) {
  return weighted_atoms_from_csv(read_csv(path));
}

std::string weighted_atoms_to_csv(const AtomSet& atoms, const WeightVector& w) {
  if (atoms.size() != w.size()) throw ValidationError("atom CSV: weight count does not match atoms");
  std::string out;
  for (std::size_t i = 0; i < atoms.dim(); ++i) out += fmt::format("x_{},", i);
  out += "w\n";
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    for (double x : atoms[k]) {
      out += format_real(x);
      out += ',';
    }
    out += format_real(w[k]);
    out += '\n';
  }
  return out;
}

}  // namespace ebprior::core
