#include <httplib.h>

#include "cl12/service.hpp"

namespace cl12 {

int serve_http(Service& service, const std::string& host, int port, const HttpStarted& on_started) {
  httplib::Server server;
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    auto out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
  int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) return 1;
  if (on_started) on_started(bound, [&server] { server.stop(); });
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace cl12
