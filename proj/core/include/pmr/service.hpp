#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmr/engine.hpp"

namespace pmr {

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

inline constexpr std::size_t kMaxPageSize = 200;

/// HTTP-independent request handlers. The engine is shared and read-only;
/// a null engine makes every engine-backed endpoint answer 503.
class SearchService {
 public:
  explicit SearchService(std::shared_ptr<const Engine> engine);

  /// POST /search  {profile, params?, expansion?, page_size?, offset?}
  HttpResponse search(std::string_view body) const;
  /// POST /expand  profile object
  HttpResponse expand(std::string_view body) const;
  /// GET /article/{pmid}?highlight=term,term
  HttpResponse article(std::string_view pmid, const std::vector<std::string>& highlight = {}) const;
  HttpResponse health() const;
  HttpResponse config() const;

 private:
  std::shared_ptr<const Engine> engine_;
};

/// Minimal HTTP host around SearchService.
class ServiceHost {
 public:
  explicit ServiceHost(std::shared_ptr<const SearchService> service);
  ~ServiceHost();
  ServiceHost(const ServiceHost&) = delete;
  ServiceHost& operator=(const ServiceHost&) = delete;

  /// Binds and blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it (or -1); then call
  /// listen_after_bind() from a serving thread.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pmr
