#include "pmr/service.hpp"

#include <chrono>

#include <httplib.h>

#include "pmr/tokenizer.hpp"

namespace pmr {

using nlohmann::json;

namespace {

HttpResponse error_response(int status, std::string message, const std::vector<FieldError>& fields = {}) {
  json body{{"error", std::move(message)}};
  if (!fields.empty()) {
    json list = json::array();
    for (const auto& f : fields) list.push_back({{"field", f.field}, {"message", f.message}});
    body["fields"] = std::move(list);
  }
  return {status, std::move(body)};
}

HttpResponse not_ready() { return error_response(503, "engine not ready"); }

std::optional<json> parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

TermSet term_set(const json& value, const std::string& field, std::vector<FieldError>& errors) {
  TermSet out;
  if (!value.is_array()) {
    errors.push_back({field, "must be an array of strings"});
    return out;
  }
  for (const auto& v : value) {
    if (!v.is_string()) {
      errors.push_back({field, "must be an array of strings"});
      return {};
    }
    auto folded = fold_case(v.get_ref<const std::string&>());
    if (!folded.empty()) out.insert(std::move(folded));
  }
  return out;
}

// Replaces the term sets named in `edits` so a client can search with a
// vetted expansion.
void apply_expansion_edits(const json& edits, ExpandedProfile& ep, std::vector<FieldError>& errors) {
  if (!edits.is_object()) {
    errors.push_back({"expansion", "must be an object"});
    return;
  }
  for (const auto& [key, value] : edits.items()) {
    if (key == "disease_terms") {
      ep.disease_terms = term_set(value, "expansion.disease_terms", errors);
    } else if (key == "drug_terms") {
      ep.drug_terms = term_set(value, "expansion.drug_terms", errors);
    } else if (key == "treatment_keywords") {
      ep.treatment_keywords = term_set(value, "expansion.treatment_keywords", errors);
    } else if (key == "genes") {
      if (!value.is_array()) {
        errors.push_back({"expansion.genes", "must be an array"});
        continue;
      }
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& g = value[i];
        const std::string prefix = "expansion.genes[" + std::to_string(i) + "]";
        if (!g.is_object() || !g.contains("name") || !g["name"].is_string()) {
          errors.push_back({prefix + ".name", "required string"});
          continue;
        }
        const auto name = fold_case(g["name"].get_ref<const std::string&>());
        auto it = std::find_if(ep.genes.begin(), ep.genes.end(), [&](const ExpandedGene& e) { return e.name == name; });
        if (it == ep.genes.end()) {
          errors.push_back({prefix + ".name", "gene '" + name + "' is not in the profile"});
          continue;
        }
        if (g.contains("gene_terms")) it->gene_terms = term_set(g["gene_terms"], prefix + ".gene_terms", errors);
        if (g.contains("candidate_variants")) {
          auto variants = term_set(g["candidate_variants"], prefix + ".candidate_variants", errors);
          if (it->specified_variant && !variants.empty()) {
            errors.push_back({prefix + ".candidate_variants", "must be empty when a variant is specified"});
          } else {
            it->candidate_variants = std::move(variants);
          }
        }
      }
    } else {
      errors.push_back({"expansion." + key, "unknown field"});
    }
  }
}

json highlights_for(const Article& article, const std::vector<std::string>& terms) {
  json spans = json::array();
  for (Field field : kFields) {
    const auto tokens = tokenize(article.field_text(field));
    for (const auto& term : terms) {
      const auto phrase = tokenize(term);
      if (phrase.empty() || phrase.size() > tokens.size()) continue;
      for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i)))
          spans.push_back({{"field", field_name(field)}, {"term", term}, {"position", i}, {"length", phrase.size()}});
      }
    }
  }
  return spans;
}

}  // namespace

SearchService::SearchService(std::shared_ptr<const Engine> engine) : engine_(std::move(engine)) {}

HttpResponse SearchService::search(std::string_view body) const {
  if (!engine_) return not_ready();
  const auto started = std::chrono::steady_clock::now();
  auto request = parse_body(body);
  if (!request || !request->is_object()) return error_response(400, "request body must be a JSON object");

  std::vector<FieldError> errors;
  PatientProfile profile;
  if (!request->contains("profile")) {
    errors.push_back({"profile", "required object"});
  } else {
    try {
      profile = profile_from_json((*request)["profile"]);
    } catch (const ProfileError& e) {
      for (auto f : e.errors()) errors.push_back({"profile." + f.field, f.message});
    }
  }

  RankingParams params = engine_->settings().ranking;
  if (auto it = request->find("params"); it != request->end() && !it->is_null()) {
    try {
      params = ranking_from_json(*it, params);
    } catch (const Error& e) {
      errors.push_back({"params", e.what()});
    }
  }

  std::size_t page_size = 10;
  std::size_t offset = 0;
  if (auto it = request->find("page_size"); it != request->end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1 || it->get<long long>() > static_cast<long long>(kMaxPageSize)) {
      errors.push_back({"page_size", "must be an integer in [1, 200]"});
    } else {
      page_size = it->get<std::size_t>();
    }
  }
  if (auto it = request->find("offset"); it != request->end()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      errors.push_back({"offset", "must be a non-negative integer"});
    } else {
      offset = it->get<std::size_t>();
    }
  }
  for (const auto& [key, _] : request->items())
    if (key != "profile" && key != "params" && key != "page_size" && key != "offset" && key != "expansion")
      errors.push_back({key, "unknown field"});
  if (!errors.empty()) return error_response(400, "invalid search request", errors);

  ExpandedProfile expanded = engine_->expand(profile);
  if (auto it = request->find("expansion"); it != request->end() && !it->is_null()) {
    apply_expansion_edits(*it, expanded, errors);
    if (!errors.empty()) return error_response(400, "invalid search request", errors);
  }

  const auto outcome = engine_->search(profile, std::move(expanded), params);
  std::vector<std::string> clause_labels;
  for (const auto& c : outcome.query.must) clause_labels.push_back(c.label);
  for (const auto& c : outcome.query.should) clause_labels.push_back(c.label);

  json items = json::array();
  for (std::size_t i = offset; i < std::min(outcome.ranked.size(), offset + page_size); ++i) {
    const auto& r = outcome.ranked[i];
    const auto& a = engine_->index().article(r.doc);
    json clauses = json::object();
    for (std::size_t c = 0; c < clause_labels.size(); ++c) clauses[clause_labels[c]] = r.clause_scores[c];
    items.push_back({{"rank", r.rank},
                     {"pmid", r.pmid},
                     {"title", a.title},
                     {"journal", a.journal},
                     {"year", a.year == 0 ? json(nullptr) : json(a.year)},
                     {"s", r.score},
                     {"r1", r.r1},
                     {"r2", r.r2},
                     {"label", r.label ? json(label_name(*r.label)) : json(nullptr)},
                     {"impact", r.impact},
                     {"sigma_h", r.sigma_h},
                     {"sigma_y", r.sigma_y},
                     {"coord", r.coord},
                     {"clause_scores", std::move(clauses)},
                     {"highlights", r.matched_terms}});
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return {200,
          {{"items", std::move(items)},
           {"total", outcome.ranked.size()},
           {"offset", offset},
           {"page_size", page_size},
           {"expansion", to_json(outcome.expanded)},
           {"query", outcome.query.to_string()},
           {"params", to_json(params)},
           {"counts",
            {{"matched", outcome.matched},
             {"demographic_rejected", outcome.demographic_rejected},
             {"label_rejected", outcome.label_rejected}}},
           {"timing_ms", ms}}};
}

HttpResponse SearchService::expand(std::string_view body) const {
  if (!engine_) return not_ready();
  auto request = parse_body(body);
  if (!request) return error_response(400, "request body must be JSON");
  const json& object = request->contains("profile") ? (*request)["profile"] : *request;
  try {
    std::vector<std::string> warnings;
    const auto profile = profile_from_json(object, &warnings);
    return {200, {{"expansion", to_json(engine_->expand(profile))}, {"warnings", warnings}}};
  } catch (const ProfileError& e) {
    return error_response(400, "invalid profile", e.errors());
  }
}

HttpResponse SearchService::article(std::string_view pmid, const std::vector<std::string>& highlight) const {
  if (!engine_) return not_ready();
  auto doc = engine_->index().find(pmid);
  if (!doc) return error_response(404, "article " + std::string(pmid) + " is not indexed");
  const auto& a = engine_->index().article(*doc);
  return {200,
          {{"article", to_json(a)},
           {"impact", engine_->tables().journals.impact_of(a.journal)},
           {"highlights", highlights_for(a, highlight)}}};
}

HttpResponse SearchService::health() const {
  json body{{"status", engine_ ? "ok" : "starting"}, {"ready", engine_ != nullptr}};
  if (engine_) {
    body["articles"] = engine_->index().size();
    body["labeler"] = engine_->model().has_value() && engine_->settings().use_labeler;
  }
  return {engine_ ? 200 : 503, std::move(body)};
}

HttpResponse SearchService::config() const {
  if (!engine_) return not_ready();
  const auto& s = engine_->settings();
  json body{{"ranking", to_json(s.ranking)},
            {"query", {{"should_boost", s.query.should_boost}, {"variant_boost", s.query.variant_boost},
                       {"age_should", s.query.age_should}}},
            {"expansion", {{"use_variants", s.expansion.use_variant_table},
                           {"treatment_keywords", s.expansion.treatment_keywords}}},
            {"labeler", s.use_labeler && engine_->model().has_value()},
            {"irrelevant_policy", s.irrelevant_policy == IrrelevantPolicy::filter ? "filter" : "demote"},
            {"rerank", s.rerank},
            {"limits", {{"max_page_size", kMaxPageSize}}}};
  if (const auto& m = engine_->model()) {
    body["model"] = {{"optimizer", optimizer_name(m->settings.optimizer.kind)},
                     {"learning_rate", m->settings.optimizer.learning_rate},
                     {"epochs", m->settings.epochs},
                     {"seed", m->settings.seed}};
  }
  return {200, std::move(body)};
}

struct ServiceHost::Impl {
  std::shared_ptr<const SearchService> service;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::vector<std::string> split_terms(const std::string& csv) {
  std::vector<std::string> terms;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    auto part = trim(std::string_view(csv).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!part.empty()) terms.emplace_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return terms;
}

}  // namespace

ServiceHost::ServiceHost(std::shared_ptr<const SearchService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto& srv = impl_->server;
  const auto* svc = impl_->service.get();
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Post("/search", [svc](const httplib::Request& req, httplib::Response& res) { send(res, svc->search(req.body)); });
  srv.Post("/expand", [svc](const httplib::Request& req, httplib::Response& res) { send(res, svc->expand(req.body)); });
  srv.Get(R"(/article/([^/]+))", [svc](const httplib::Request& req, httplib::Response& res) {
    std::vector<std::string> terms;
    if (req.has_param("highlight")) terms = split_terms(req.get_param_value("highlight"));
    send(res, svc->article(req.matches[1].str(), terms));
  });
  srv.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { send(res, svc->health()); });
  srv.Get("/config", [svc](const httplib::Request&, httplib::Response& res) { send(res, svc->config()); });
}

ServiceHost::~ServiceHost() { stop(); }

bool ServiceHost::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int ServiceHost::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool ServiceHost::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ServiceHost::wait_until_ready() const { impl_->server.wait_until_ready(); }

void ServiceHost::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace pmr
