#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fstream>
#include <sstream>

#include "qregress/dataset.hpp"

namespace qregress::data {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError(0, "cannot open '" + path + "'");
  std::ostringstream body;
  body << in.rdbuf();
  if (in.bad()) throw FetchError(0, "error reading '" + path + "'");
  return body.str();
}

}  // namespace

std::string fetch_remote(const std::string& url, std::chrono::milliseconds timeout) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return read_file(url);

  const std::string scheme = url.substr(0, scheme_end);
  if (scheme == "file") return read_file(url.substr(scheme_end + 3));
  if (scheme != "http" && scheme != "https") throw FetchError(0, "unsupported URL scheme '" + scheme + "'");

  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (origin.size() == scheme_end + 3) throw FetchError(0, "URL has no host: '" + url + "'");

  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(true);

  auto res = client.Get(path);
  if (!res) {
    throw FetchError(0, "request to '" + url + "' failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw FetchError(res->status, "request to '" + url + "' returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace qregress::data
