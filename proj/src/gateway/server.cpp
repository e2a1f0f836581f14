#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "viz/gateway.hpp"

namespace viz::gateway {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

const char* kBuiltinIndex =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>viz</title></head>\n"
    "<body><h1>viz session server</h1>\n"
    "<p>Connect a WebSocket client to <code>/session</code> and exchange JSON messages as described in "
    "docs/protocol.md.</p></body></html>\n";

std::string mimeType(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

}  // namespace

struct Server::Impl {
  class WsSession;
  class HttpSession;

  explicit Impl(ServeOptions opts) : options(std::move(opts)), acceptor(ioc) {
    lang::EvalContext ctx;
    ctx.dataRoot = options.dataDir;
    ctx.scriptDir = options.dataDir;
    host = SessionHost(ctx);
    const tcp::endpoint ep(asio::ip::make_address(options.address), options.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(asio::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
  }

  void accept();
  void route(std::shared_ptr<WsSession> from, const std::string& text);
  http::response<http::string_body> staticResponse(const http::request<http::string_body>& req) const;

  ServeOptions options;
  asio::io_context ioc{1};
  tcp::acceptor acceptor;
  SessionHost host;
  std::set<std::shared_ptr<WsSession>> clients;
};

class Server::Impl::WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Impl& impl) : ws_(std::move(socket)), impl_(impl) {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->impl_.clients.insert(self);
      self->read();
    });
  }

  void send(bool binary, std::shared_ptr<const std::string> payload) {
    queue_.push_back({binary, std::move(payload)});
    if (queue_.size() == 1) write();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->impl_.clients.erase(self);
        return;
      }
      const bool binary = self->ws_.got_binary();
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (binary) {
        const auto err = errorMessage("binary client frames are not part of the protocol", "protocol");
        self->send(false, std::make_shared<const std::string>(err.payload));
      } else {
        self->impl_.route(self, text);
      }
      self->read();
    });
  }

  void write() {
    const auto& [binary, payload] = queue_.front();
    ws_.binary(binary);
    ws_.async_write(asio::buffer(*payload), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->impl_.clients.erase(self);
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::pair<bool, std::shared_ptr<const std::string>>> queue_;
  Impl& impl_;
};

class Server::Impl::HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Impl& impl) : stream_(std::move(socket)), impl_(impl) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->dispatch();
    });
  }

 private:
  void dispatch();

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<http::response<http::string_body>> res_;
  Impl& impl_;
};

void Server::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpSession>(std::move(socket), *this)->start();
    accept();
  });
}

void Server::Impl::route(std::shared_ptr<WsSession> from, const std::string& text) {
  for (auto& out : host.handle(text)) {
    auto payload = std::make_shared<const std::string>(std::move(out.payload));
    if (out.target == Outgoing::Target::Sender) {
      from->send(out.binary, payload);
    } else {
      for (const auto& c : clients) c->send(out.binary, payload);
    }
  }
}

http::response<http::string_body> Server::Impl::staticResponse(const http::request<http::string_body>& req) const {
  http::response<http::string_body> res{http::status::ok, req.version()};
  res.set(http::field::server, "viz");
  res.keep_alive(false);
  auto reply = [&](http::status st, std::string body, const std::string& type) {
    res.result(st);
    res.set(http::field::content_type, type);
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, "method not allowed\n", "text/plain");
  std::string target(req.target());
  if (auto q = target.find('?'); q != std::string::npos) target.resize(q);
  if (target == "/" || target.empty()) target = "/index.html";
  if (options.staticDir.empty()) {
    if (target == "/index.html") return reply(http::status::ok, kBuiltinIndex, "text/html");
    return reply(http::status::not_found, "not found\n", "text/plain");
  }
  const std::filesystem::path rel = std::filesystem::path(target.substr(1)).lexically_normal();
  if (rel.empty() || rel.is_absolute() || *rel.begin() == "..") {
    return reply(http::status::not_found, "not found\n", "text/plain");
  }
  std::ifstream in(options.staticDir / rel, std::ios::binary);
  if (!in) return reply(http::status::not_found, "not found\n", "text/plain");
  std::ostringstream body;
  body << in.rdbuf();
  return reply(http::status::ok, body.str(), mimeType(rel));
}

void Server::Impl::HttpSession::dispatch() {
  if (websocket::is_upgrade(req_)) {
    if (req_.target() != "/session") {
      res_ = std::make_shared<http::response<http::string_body>>(http::status::not_found, req_.version());
      res_->body() = "websocket endpoint is /session\n";
    } else {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), impl_)->start(std::move(req_));
      return;
    }
  } else {
    res_ = std::make_shared<http::response<http::string_body>>(impl_.staticResponse(req_));
  }
  res_->keep_alive(false);
  res_->prepare_payload();
  http::async_write(stream_, *res_, [self = shared_from_this()](beast::error_code, std::size_t) {
    beast::error_code ignored;
    self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
  });
}

Server::Server(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->accept();
  impl_->ioc.run();
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace viz::gateway
