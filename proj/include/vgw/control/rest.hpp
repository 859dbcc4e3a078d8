#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/json.hpp"

namespace vgw::control {

struct RestRequest {
  std::string verb;  // "GET", "POST", "PUT", "DELETE", ...
  std::string path;
  Json body;
};

struct RestResponse {
  int status = 200;
  Json body;
  std::string location;

  bool ok() const { return status >= 200 && status < 300; }
};

constexpr int http_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedRequest: return 400;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Conflict: return 409;
    default: return 500;
  }
}

inline RestResponse error_response(const Error& e) {
  return {http_status(e.code()), {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}, {}};
}

/// Verb + path-template dispatcher. Templates use "{name}" for one segment.
/// A known path with an unregistered verb answers 405; an unknown path 404.
class Router {
 public:
  using Params = std::map<std::string, std::string>;
  using Handler = std::function<RestResponse(const RestRequest&, const Params&)>;

  void add(std::string verb, std::string pattern, Handler h) {
    routes_.push_back({std::move(verb), split(pattern), std::move(h)});
  }

  RestResponse dispatch(const RestRequest& req) const {
    const auto segments = split(req.path);
    bool path_known = false;
    for (const auto& r : routes_) {
      auto params = match(r.pattern, segments);
      if (!params) continue;
      path_known = true;
      if (r.verb != req.verb) continue;
      try {
        return r.handler(req, *params);
      } catch (const Error& e) {
        return error_response(e);
      } catch (const Json::exception& e) {
        return error_response(Error(ErrorCode::MalformedRequest, e.what()));
      }
    }
    if (path_known) return {405, {{"error", "METHOD_NOT_ALLOWED"}, {"message", req.verb + " " + req.path}}, {}};
    return {404, {{"error", "NOT_FOUND"}, {"message", "no resource " + req.path}}, {}};
  }

  /// The registered verb/path-template pairs.
  std::vector<std::pair<std::string, std::string>> routes() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& r : routes_) {
      std::string p;
      for (const auto& s : r.pattern) p += "/" + s;
      out.emplace_back(r.verb, p);
    }
    return out;
  }

 private:
  struct Route {
    std::string verb;
    std::vector<std::string> pattern;
    Handler handler;
  };

  static std::vector<std::string> split(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    const auto end = path.find('?');
    for (char c : path.substr(0, end)) {
      if (c == '/') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  static std::optional<Params> match(const std::vector<std::string>& pattern, const std::vector<std::string>& path) {
    if (pattern.size() != path.size()) return std::nullopt;
    Params params;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const auto& p = pattern[i];
      if (p.size() > 2 && p.front() == '{' && p.back() == '}') {
        params[p.substr(1, p.size() - 2)] = path[i];
      } else if (p != path[i]) {
        return std::nullopt;
      }
    }
    return params;
  }

  std::vector<Route> routes_;
};

}  // namespace vgw::control
