#include "corelit/citation_network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"

namespace corelit {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint32_t intern(const std::string& id, std::vector<DocumentId>& ids,
                     std::unordered_map<std::string, std::uint32_t>& index) {
  auto it = index.find(id);
  if (it != index.end()) return it->second;
  auto idx = static_cast<std::uint32_t>(ids.size());
  ids.push_back(id);
  index.emplace(id, idx);
  return idx;
}

}  // namespace

std::string_view typology_name(Typology t) {
  switch (t) {
    case Typology::monograph: return "monograph";
    case Typology::article: return "article";
    case Typology::reference_work: return "reference-work";
    case Typology::primary_source: return "primary-source";
    case Typology::other: return "other";
  }
  return "other";
}

std::optional<Typology> parse_typology(std::string_view name) {
  if (name == "monograph") return Typology::monograph;
  if (name == "article") return Typology::article;
  if (name == "reference-work") return Typology::reference_work;
  if (name == "primary-source") return Typology::primary_source;
  if (name == "other") return Typology::other;
  return std::nullopt;
}

CitationNetwork CitationNetwork::build(const std::vector<std::pair<DocumentId, DocumentId>>& rows,
                                       BuildCounts* counts) {
  CitationNetwork net;
  BuildCounts local;

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(rows.size() * 2);
  for (const auto& [citing, cited] : rows) {
    if (citing == cited) {
      ++local.self_loops;
      continue;
    }
    std::uint32_t ci = intern(citing, net.citing_ids_, net.citing_index_);
    std::uint32_t si = intern(cited, net.cited_ids_, net.cited_index_);
    std::uint64_t key = (static_cast<std::uint64_t>(ci) << 32) | si;
    if (!seen.insert(key).second) {
      ++local.duplicate_rows;
      continue;
    }
    net.edge_citing_.push_back(ci);
    net.edge_cited_.push_back(si);
  }

  // Canonical slot order removes any dependence on input row order.
  std::vector<std::uint32_t> order(net.edge_citing_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (net.edge_citing_[a] != net.edge_citing_[b]) return net.edge_citing_[a] < net.edge_citing_[b];
    return net.edge_cited_[a] < net.edge_cited_[b];
  });
  std::vector<std::uint32_t> ec(order.size()), es(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    ec[i] = net.edge_citing_[order[i]];
    es[i] = net.edge_cited_[order[i]];
  }
  net.edge_citing_ = std::move(ec);
  net.edge_cited_ = std::move(es);

  net.in_degree_.assign(net.cited_ids_.size(), 0);
  net.out_degree_.assign(net.citing_ids_.size(), 0);
  for (std::size_t e = 0; e < net.edge_citing_.size(); ++e) {
    ++net.out_degree_[net.edge_citing_[e]];
    ++net.in_degree_[net.edge_cited_[e]];
  }

  net.citer_offsets_.assign(net.cited_ids_.size() + 1, 0);
  for (std::uint32_t s : net.edge_cited_) ++net.citer_offsets_[s + 1];
  for (std::size_t i = 1; i < net.citer_offsets_.size(); ++i) {
    net.citer_offsets_[i] += net.citer_offsets_[i - 1];
  }
  net.citer_list_.resize(net.edge_citing_.size());
  std::vector<std::size_t> cursor(net.citer_offsets_.begin(), net.citer_offsets_.end() - 1);
  for (std::size_t e = 0; e < net.edge_citing_.size(); ++e) {
    net.citer_list_[cursor[net.edge_cited_[e]]++] = net.edge_citing_[e];
  }
  for (std::uint32_t s = 0; s < net.cited_ids_.size(); ++s) {
    auto begin = net.citer_list_.begin() + static_cast<std::ptrdiff_t>(net.citer_offsets_[s]);
    auto end = net.citer_list_.begin() + static_cast<std::ptrdiff_t>(net.citer_offsets_[s + 1]);
    std::sort(begin, end);
  }

  net.citing_twin_.assign(net.cited_ids_.size(), -1);
  for (std::uint32_t s = 0; s < net.cited_ids_.size(); ++s) {
    auto it = net.citing_index_.find(net.cited_ids_[s]);
    if (it != net.citing_index_.end()) net.citing_twin_[s] = static_cast<std::int32_t>(it->second);
  }

  if (counts) *counts = local;
  return net;
}

std::optional<std::uint32_t> CitationNetwork::citing_index(std::string_view id) const {
  auto it = citing_index_.find(std::string(id));
  if (it == citing_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> CitationNetwork::cited_index(std::string_view id) const {
  auto it = cited_index_.find(std::string(id));
  if (it == cited_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> CitationNetwork::citers_of(std::uint32_t cited_idx) const {
  return {citer_list_.data() + citer_offsets_[cited_idx],
          citer_offsets_[cited_idx + 1] - citer_offsets_[cited_idx]};
}

const DocumentRecord* CitationNetwork::record(std::string_view id) const {
  auto it = record_index_.find(std::string(id));
  if (it == record_index_.end()) return nullptr;
  return &records_[it->second];
}

void CitationNetwork::attach_records(std::vector<DocumentRecord> records) {
  records_ = std::move(records);
  record_index_.clear();
  for (std::size_t i = 0; i < records_.size(); ++i) {
    records_[i].is_citing = citing_index_.count(records_[i].id) > 0;
    record_index_[records_[i].id] = i;
  }
}

namespace {

std::vector<DocumentRecord> load_metadata(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw parse_error("metadata file is empty", 1);
  if (fields.size() != 5 || fields[0] != "id") {
    throw parse_error("expected metadata header id,label,year,typology,raw_reference", reader.line());
  }
  std::vector<DocumentRecord> records;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank trailing line
    if (fields.size() != 5) {
      throw parse_error("metadata row has " + std::to_string(fields.size()) + " fields, expected 5",
                        reader.line());
    }
    DocumentRecord rec;
    rec.id = trim(fields[0]);
    if (rec.id.empty()) throw parse_error("empty id in metadata", reader.line());
    rec.label = fields[1];
    std::string year = trim(fields[2]);
    if (!year.empty()) {
      if (year.size() > 4 || !std::all_of(year.begin(), year.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        throw parse_error("year must be a 1-4 digit positive integer, got '" + year + "'",
                          reader.line());
      }
      int value = std::stoi(year);
      if (value <= 0) throw parse_error("year must be positive", reader.line());
      rec.year = value;
    }
    std::string typ = trim(fields[3]);
    if (!typ.empty()) {
      auto parsed = parse_typology(typ);
      if (!parsed) throw parse_error("unknown typology '" + typ + "'", reader.line());
      rec.typology = parsed;
    }
    if (!fields[4].empty()) rec.raw_reference = fields[4];
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

CitationNetwork load_citations(const std::string& edges_path, InputFormat format,
                               const std::string& metadata_path, const LoadOptions& options,
                               LoadReport* report) {
  CsvReader reader(edges_path);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw empty_network_error(edges_path + " is empty");
  if (fields.size() != 2 || fields[0] != "citing_id" || fields[1] != "cited_id") {
    throw parse_error("expected header citing_id,cited_id", reader.line());
  }

  std::vector<DocumentRecord> records;
  if (format == InputFormat::edge_csv_with_metadata) {
    if (metadata_path.empty()) throw config_error("edge-csv-with-metadata requires a metadata file");
    records = load_metadata(metadata_path);
  }
  std::unordered_set<std::string> no_author;
  if (options.drop_references_without_author) {
    for (const auto& rec : records) {
      if (rec.label.empty()) no_author.insert(rec.id);
    }
  }

  LoadReport local;
  std::vector<std::pair<DocumentId, DocumentId>> rows;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw parse_error("edge row has " + std::to_string(fields.size()) + " fields, expected 2",
                        reader.line());
    }
    std::string citing = trim(fields[0]);
    std::string cited = trim(fields[1]);
    if (citing.empty() || cited.empty()) throw parse_error("empty document id", reader.line());
    ++local.rows;
    if (!no_author.empty() && no_author.count(cited)) {
      ++local.no_author_dropped;
      continue;
    }
    rows.emplace_back(std::move(citing), std::move(cited));
  }

  CitationNetwork::BuildCounts counts;
  CitationNetwork net = CitationNetwork::build(rows, &counts);
  local.duplicate_rows_dropped = counts.duplicate_rows;
  local.self_loops_dropped = counts.self_loops;
  if (report) *report = local;
  if (net.edge_count() == 0) throw empty_network_error(edges_path + " produced a network with no edges");

  if (!records.empty()) net.attach_records(std::move(records));
  return net;
}

std::size_t MergeReport::merged_members() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.members.size() - 1;
  return n;
}

void MergeReport::write_csv(const std::string& path) const {
  CsvWriter out(path);
  out.row({"group_id", "canonical_id", "member_id", "similarity"});
  for (const auto& g : groups) {
    for (const auto& m : g.members) {
      out.row({std::to_string(g.group_id), g.canonical, m.id, format_double(m.similarity)});
    }
  }
  out.close();
}

DedupResult dedup_references(const CitationNetwork& network, const DedupOptions& options) {
  if (options.similarity_threshold < 0.0 || options.similarity_threshold > 1.0) {
    throw config_error("similarity threshold must lie in [0,1]");
  }

  const auto& cited = network.cited_ids();
  const std::size_t n = cited.size();

  std::vector<std::string> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DocumentRecord* rec = network.record(cited[i]);
    if (rec && rec->raw_reference) {
      keys[i] = normalize_reference(*rec->raw_reference, options.normalization);
    } else if (options.normalization == ReferenceNormalization::none) {
      keys[i] = cited[i];
    } else {
      throw config_error("cited document '" + cited[i] + "' has no raw_reference");
    }
  }

  // Union-find over pairs at or above the threshold.
  std::vector<std::uint32_t> parent(n);
  for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  if (options.block_on_first_token) {
    auto first_token = [&](std::uint32_t i) {
      const std::string& k = keys[i];
      return std::string_view(k).substr(0, k.find(' '));
    };
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return first_token(a) < first_token(b);
    });
    std::size_t block_start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i == n || first_token(order[i]) != first_token(order[block_start])) {
        for (std::size_t a = block_start; a < i; ++a) {
          for (std::size_t b = a + 1; b < i; ++b) {
            if (jaro_winkler_similarity(keys[order[a]], keys[order[b]]) >=
                options.similarity_threshold) {
              unite(order[a], order[b]);
            }
          }
        }
        block_start = i;
      }
    }
  } else {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (jaro_winkler_similarity(keys[i], keys[j]) >= options.similarity_threshold) {
          unite(i, j);
        }
      }
    }
  }

  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  // Canonical id: lexicographically smallest member id.
  std::vector<std::string> canonical(n);
  MergeReport report;
  std::vector<const std::vector<std::uint32_t>*> merged;
  for (const auto& [root, members] : groups) {
    std::uint32_t best = members.front();
    for (std::uint32_t m : members) {
      if (cited[m] < cited[best]) best = m;
    }
    for (std::uint32_t m : members) canonical[m] = cited[best];
    if (members.size() >= 2) merged.push_back(&members);
  }
  std::sort(merged.begin(), merged.end(),
            [&](auto* a, auto* b) { return canonical[a->front()] < canonical[b->front()]; });
  for (std::size_t g = 0; g < merged.size(); ++g) {
    MergeGroup group;
    group.group_id = static_cast<std::uint32_t>(g);
    group.canonical = canonical[merged[g]->front()];
    std::vector<std::uint32_t> members = *merged[g];
    std::sort(members.begin(), members.end(),
              [&](std::uint32_t a, std::uint32_t b) { return cited[a] < cited[b]; });
    for (std::uint32_t m : members) {
      double best = 0.0;
      for (std::uint32_t other : members) {
        if (other == m) continue;
        best = std::max(best, jaro_winkler_similarity(keys[m], keys[other]));
      }
      group.members.push_back({cited[m], best});
    }
    report.groups.push_back(std::move(group));
  }

  std::vector<std::pair<DocumentId, DocumentId>> rows;
  rows.reserve(network.edge_count());
  auto citing_span = network.edge_citing();
  auto cited_span = network.edge_cited();
  for (std::size_t e = 0; e < citing_span.size(); ++e) {
    rows.emplace_back(network.citing_ids()[citing_span[e]], canonical[cited_span[e]]);
  }
  CitationNetwork rebuilt = CitationNetwork::build(rows);

  // Surviving metadata keyed by canonical ids.
  if (!network.records().empty()) {
    std::vector<DocumentRecord> kept;
    for (const auto& rec : network.records()) {
      auto idx = network.cited_index(rec.id);
      if (idx && canonical[*idx] != rec.id) continue;  // merged away
      kept.push_back(rec);
    }
    rebuilt.attach_records(std::move(kept));
  }
  return {std::move(rebuilt), std::move(report)};
}

CoreSet select_core(const CitationNetwork& network, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) throw config_error("quantile must lie in (0,1)");
  if (network.edge_count() == 0) throw empty_network_error("cannot select core of an empty network");

  const std::size_t n = network.cited_count();
  std::vector<std::uint32_t> degrees(n);
  for (std::uint32_t i = 0; i < n; ++i) degrees[i] = network.in_degree(i);
  std::vector<std::uint32_t> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());

  // Nearest rank, with a guard that snaps q*n to an integer when it is one up
  // to rounding error (decimal quantiles rarely multiply exactly in binary).
  double exact = quantile * static_cast<double>(n);
  double snapped = std::min(exact, static_cast<double>(n));
  double nearest = std::nearbyint(snapped);
  std::size_t rank;
  if (std::abs(snapped - nearest) < 1e-9 * static_cast<double>(n) && nearest >= 1.0) {
    rank = static_cast<std::size_t>(nearest);
  } else {
    rank = static_cast<std::size_t>(std::ceil(snapped));
  }
  rank = std::min(std::max<std::size_t>(rank, 1), n);
  std::uint32_t threshold = sorted[rank - 1];

  CoreSet core;
  core.quantile = quantile;
  core.threshold = threshold;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (degrees[i] >= threshold) {
      core.members.push_back({network.cited_ids()[i], degrees[i], i});
    }
  }
  std::sort(core.members.begin(), core.members.end(), [](const auto& a, const auto& b) {
    if (a.in_degree != b.in_degree) return a.in_degree > b.in_degree;
    return a.id < b.id;
  });
  return core;
}

}  // namespace corelit
