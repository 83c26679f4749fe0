#include "depositlag/records_io.h"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "depositlag/csv.h"
#include "depositlag/errors.h"

namespace depositlag {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::optional<std::string> opt_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<int> opt_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) {
    const std::string s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return std::stoi(s);
  }
  return it->get<int>();
}

std::vector<std::string> string_list(const json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (it->is_string()) {
    out.push_back(it->get<std::string>());
    return out;
  }
  for (const auto& v : *it) out.push_back(v.get<std::string>());
  return out;
}

std::vector<AuthorName> parse_authors(const json& obj) {
  std::vector<AuthorName> authors;
  auto it = obj.find("authors");
  if (it == obj.end() || it->is_null()) return authors;
  for (const auto& a : *it) {
    if (a.is_string()) {
      authors.push_back(AuthorName{std::nullopt, std::nullopt, a.get<std::string>()});
      continue;
    }
    AuthorName name{opt_string(a, "given"), opt_string(a, "family"), opt_string(a, "raw")};
    if (!name.family && !name.raw && !name.given) continue;
    authors.push_back(std::move(name));
  }
  return authors;
}

ojson authors_json(std::span<const AuthorName> authors) {
  ojson arr = ojson::array();
  for (const AuthorName& a : authors) {
    ojson o = ojson::object();
    if (a.given) o["given"] = *a.given;
    if (a.family) o["family"] = *a.family;
    if (a.raw) o["raw"] = *a.raw;
    arr.push_back(std::move(o));
  }
  return arr;
}

PartialDate parse_partial_date(const json& v) {
  if (v.is_string()) {
    // "YYYY", "YYYY-MM" or "YYYY-MM-DD..."
    const std::string s = v.get<std::string>();
    PartialDate d;
    if (s.size() >= 4) d.year = std::stoi(s.substr(0, 4));
    if (s.size() >= 7) d.month = std::stoi(s.substr(5, 2));
    if (s.size() >= 10) d.day = std::stoi(s.substr(8, 2));
    return d;
  }
  return PartialDate{opt_int(v, "year"), opt_int(v, "month"), opt_int(v, "day")};
}

ojson partial_date_json(const PartialDate& d) {
  ojson o = ojson::object();
  o["year"] = d.year ? ojson(*d.year) : ojson();
  o["month"] = d.month ? ojson(*d.month) : ojson();
  o["day"] = d.day ? ojson(*d.day) : ojson();
  return o;
}

template <typename Fn>
void for_each_json_line(std::istream& in, const char* what, Fn&& fn) {
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(text));
    } catch (const json::exception& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) + ": bad number");
    } catch (const RecordRejected& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ojson registry_json(const RegistryRecord& r) {
  ojson o;
  o["doi"] = r.doi;
  o["title"] = r.title;
  o["authors"] = authors_json(r.authors);
  o["published"] = r.published.iso();
  o["issn"] = r.issn;
  o["accepted"] = r.accepted ? ojson(r.accepted->iso()) : ojson();
  o["affiliation_countries"] = r.affiliation_countries;
  return o;
}

RegistryRecord registry_from_json(const json& o) {
  std::optional<CalendarDate> accepted;
  if (auto a = opt_string(o, "accepted")) accepted = CalendarDate::parse_iso(*a);
  return RegistryRecord{o.at("doi").get<std::string>(),
                        o.value("title", ""),
                        parse_authors(o),
                        CalendarDate::parse_iso(o.at("published").get<std::string>()),
                        string_list(o, "issn"),
                        accepted,
                        string_list(o, "affiliation_countries")};
}

}  // namespace

std::vector<RawRegistryRecord> read_registry_jsonl(std::istream& in) {
  std::vector<RawRegistryRecord> out;
  for_each_json_line(in, "registry", [&](const json& o) {
    RawRegistryRecord r;
    r.doi = opt_string(o, "doi").value_or("");
    r.title = opt_string(o, "title").value_or("");
    r.authors = parse_authors(o);
    if (auto p = o.find("published"); p != o.end() && !p->is_null()) r.published = parse_partial_date(*p);
    r.issn = string_list(o, "issn");
    if (auto a = o.find("accepted"); a != o.end() && !a->is_null()) r.accepted = parse_partial_date(*a);
    r.affiliation_countries = string_list(o, "affiliation_countries");
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<RepositoryRecord> read_repository_jsonl(std::istream& in) {
  std::vector<RepositoryRecord> out;
  for_each_json_line(in, "repository", [&](const json& o) {
    RepositoryRecord r;
    r.record_id = o.at("record_id").get<std::string>();
    r.repo_id = o.at("repo_id").get<std::string>();
    r.title = opt_string(o, "title").value_or("");
    r.authors = parse_authors(o);
    r.year = opt_int(o, "year");
    r.doi = opt_string(o, "doi");
    if (r.doi && r.doi->find_first_not_of(" \t") == std::string::npos) r.doi.reset();
    if (auto d = opt_string(o, "deposit_date"); d && !d->empty()) {
      r.deposit_date = CalendarDate::parse_iso(*d);
      r.provenance = DateProvenance::kSelf;
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::map<std::string, RepositoryInfo> read_repository_registry(std::istream& in) {
  std::map<std::string, RepositoryInfo> out;
  try {
    const json doc = json::parse(in);
    if (!doc.is_array()) throw DataError("repository registry must be a JSON array");
    for (const auto& o : doc) {
      RepositoryInfo info;
      info.repo_id = o.at("repo_id").get<std::string>();
      info.name = o.value("name", "");
      info.country = opt_string(o, "country");
      if (info.country && info.country->empty()) info.country.reset();
      info.platform = platform_from_string(o.value("platform", "OTHER"));
      const std::string id = info.repo_id;
      if (!out.emplace(id, std::move(info)).second) throw DataError("duplicate repo_id " + id);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("repository registry: ") + e.what());
  }
  return out;
}

std::vector<LinkedPublication> read_linked_jsonl(std::istream& in) {
  std::vector<LinkedPublication> out;
  for_each_json_line(in, "linked publications", [&](const json& o) {
    LinkedPublication pub;
    pub.doi = o.at("doi").get<std::string>();
    pub.registry = registry_from_json(o.at("registry"));
    for (const auto& d : o.at("deposits")) {
      pub.deposits.push_back(Deposit{d.at("repo_id").get<std::string>(),
                                     CalendarDate::parse_iso(d.at("deposit_date").get<std::string>()),
                                     d.at("record_id").get<std::string>()});
    }
    if (pub.deposits.empty()) throw DataError("publication " + pub.doi + " has no deposits");
    for (const std::string& c : string_list(o, "countries")) pub.countries.insert(c);
    if (auto s = o.find("subjects"); s != o.end() && !s->is_null()) {
      pub.subjects = std::set<std::string>(s->begin(), s->end());
    }
    if (auto p = o.find("panels"); p != o.end() && !p->is_null()) {
      pub.panels = std::set<std::string>(p->begin(), p->end());
    }
    out.push_back(std::move(pub));
  });
  return out;
}

std::map<std::string, CalendarDate> read_date_overrides_csv(std::istream& in) {
  std::map<std::string, CalendarDate> out;
  const auto rows = csv::read_rows(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && !rows[i].empty() && rows[i][0] == "record_id") continue;
    if (rows[i].size() < 2) throw DataError("date override row " + std::to_string(i + 1) + " needs two columns");
    out.insert_or_assign(rows[i][0], CalendarDate::parse_iso(rows[i][1]));
  }
  return out;
}

void write_registry_jsonl(std::ostream& out, std::span<const RawRegistryRecord> records) {
  for (const RawRegistryRecord& r : records) {
    ojson o;
    o["doi"] = r.doi;
    o["title"] = r.title;
    o["authors"] = authors_json(r.authors);
    o["published"] = partial_date_json(r.published);
    o["issn"] = r.issn;
    o["accepted"] = r.accepted ? partial_date_json(*r.accepted) : ojson();
    o["affiliation_countries"] = r.affiliation_countries;
    out << o.dump() << '\n';
  }
}

void write_repository_jsonl(std::ostream& out, std::span<const RepositoryRecord> records) {
  for (const RepositoryRecord& r : records) {
    ojson o;
    o["record_id"] = r.record_id;
    o["repo_id"] = r.repo_id;
    o["title"] = r.title;
    o["authors"] = authors_json(r.authors);
    o["year"] = r.year ? ojson(*r.year) : ojson();
    o["doi"] = r.doi ? ojson(*r.doi) : ojson();
    o["deposit_date"] = r.deposit_date ? ojson(r.deposit_date->iso()) : ojson();
    out << o.dump() << '\n';
  }
}

void write_repository_registry(std::ostream& out, const std::map<std::string, RepositoryInfo>& repositories) {
  ojson arr = ojson::array();
  for (const auto& [id, info] : repositories) {
    ojson o;
    o["repo_id"] = info.repo_id;
    o["name"] = info.name;
    o["country"] = info.country ? ojson(*info.country) : ojson();
    o["platform"] = to_string(info.platform);
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

void write_linked_jsonl(std::ostream& out, std::span<const LinkedPublication> publications) {
  for (const LinkedPublication& pub : publications) {
    ojson o;
    o["doi"] = pub.doi;
    o["registry"] = registry_json(pub.registry);
    ojson deposits = ojson::array();
    for (const Deposit& d : pub.deposits) {
      deposits.push_back({{"repo_id", d.repo_id}, {"record_id", d.record_id}, {"deposit_date", d.deposit_date.iso()}});
    }
    o["deposits"] = std::move(deposits);
    o["countries"] = pub.countries;
    o["subjects"] = pub.subjects ? ojson(*pub.subjects) : ojson();
    o["panels"] = pub.panels ? ojson(*pub.panels) : ojson();
    out << o.dump() << '\n';
  }
}

void write_date_overrides_csv(std::ostream& out, const std::map<std::string, CalendarDate>& dates) {
  csv::write_row(out, {"record_id", "deposit_date"});
  for (const auto& [id, date] : dates) csv::write_row(out, {id, date.iso()});
}

void write_rejections_csv(std::ostream& out, std::span<const Rejection> rejections, std::string_view kind) {
  for (const Rejection& r : rejections) {
    csv::write_row(out, {std::string(kind), r.id, std::string(to_string(r.reason)), r.detail});
  }
}

void write_ambiguous_csv(std::ostream& out, std::span<const AmbiguousKey> ambiguous) {
  csv::write_row(out, {"norm_title", "year", "norm_family", "registry_dois"});
  for (const AmbiguousKey& a : ambiguous) {
    std::string dois;
    for (const std::string& d : a.registry_dois) dois += (dois.empty() ? "" : ";") + d;
    csv::write_row(out, {a.key.norm_title, std::to_string(a.key.year), a.key.norm_family, dois});
  }
}

std::string accuracy_report_json(const MatchingAccuracyReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(); };
  ojson o;
  o["total_pairs"] = report.total_pairs;
  o["no_repo_doi"] = report.no_repo_doi;
  o["both_doi"] = report.both_doi;
  o["exact_match"] = report.exact_match;
  o["substring_match"] = report.substring_match;
  o["mismatch"] = report.mismatch;
  o["accuracy"] = opt(report.accuracy);
  o["no_repo_doi_share"] = opt(report.no_repo_doi_share());
  o["exact_share"] = opt(report.exact_share());
  o["non_exact_share"] = opt(report.non_exact_share());
  o["substring_share_of_non_exact"] = opt(report.substring_share_of_non_exact());
  return o.dump(2) + "\n";
}

}  // namespace depositlag
