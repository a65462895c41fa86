#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>
#include <list>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "tggdbg/server.hpp"

namespace tgg {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

bool looksLikeHttp(tcp::socket& socket) {
  char head[4] = {};
  std::size_t n = 0;
  // Peek until four bytes are buffered or the first line is complete.
  for (int attempt = 0; attempt < 200; ++attempt) {
    n = socket.receive(asio::buffer(head), tcp::socket::message_peek);
    if (n >= 4 || n == 0 || std::find(head, head + n, '\n') != head + n) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return n >= 4 && std::string_view(head, 4) == "GET ";
}

void feed(DebugServer& server, std::string_view chunk, const std::function<void(const std::string&)>& send) {
  std::size_t start = 0;
  while (start < chunk.size()) {
    std::size_t end = chunk.find('\n', start);
    if (end == std::string_view::npos) end = chunk.size();
    std::string_view line = chunk.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      for (const auto& out : server.handleLine(line)) send(out + "\n");
    }
    start = end + 1;
  }
}

void serveWebSocket(tcp::socket& socket, DebugServer& server) {
  beast::flat_buffer buffer;
  beast::http::request<beast::http::string_body> request;
  beast::http::read(socket, buffer, request);
  websocket::stream<tcp::socket&> ws(socket);
  ws.text(true);
  ws.accept(request);
  for (;;) {
    beast::flat_buffer frame;
    beast::error_code ec;
    ws.read(frame, ec);
    if (ec) return;
    feed(server, beast::buffers_to_string(frame.data()), [&](const std::string& out) { ws.write(asio::buffer(out)); });
  }
}

void servePlain(tcp::socket& socket, DebugServer& server) {
  asio::streambuf buffer;
  for (;;) {
    boost::system::error_code ec;
    const std::size_t n = asio::read_until(socket, buffer, '\n', ec);
    if (ec && n == 0) return;
    std::string line(asio::buffers_begin(buffer.data()), asio::buffers_begin(buffer.data()) + n);
    buffer.consume(n);
    feed(server, line, [&](const std::string& out) { asio::write(socket, asio::buffer(out)); });
    if (ec) return;
  }
}

}  // namespace

struct TransportServer::Impl {
  SessionConfig config;
  asio::io_context io;
  tcp::acceptor acceptor;
  std::atomic<bool> stopping{false};
  std::mutex threadsMutex;
  std::list<std::thread> threads;
  std::list<std::shared_ptr<tcp::socket>> sockets;

  Impl(SessionConfig c, std::uint16_t port, const std::string& address)
      : config(std::move(c)), acceptor(io, tcp::endpoint(asio::ip::make_address(address), port)) {}

  void connection(std::shared_ptr<tcp::socket> socket) {
    try {
      DebugServer server(config.makeSession());
      if (looksLikeHttp(*socket)) {
        serveWebSocket(*socket, server);
      } else {
        servePlain(*socket, server);
      }
    } catch (const std::exception& e) {
      if (!stopping) std::cerr << "connection closed: " << e.what() << "\n";
    }
  }
};

TransportServer::TransportServer(SessionConfig config, std::uint16_t port, std::string address)
    : impl_(std::make_unique<Impl>(std::move(config), port, address)) {}

TransportServer::~TransportServer() {
  stop();
  std::lock_guard lock(impl_->threadsMutex);
  for (auto& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
}

std::uint16_t TransportServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TransportServer::run() {
  while (!impl_->stopping) {
    auto socket = std::make_shared<tcp::socket>(impl_->io);
    boost::system::error_code ec;
    impl_->acceptor.accept(*socket, ec);
    if (ec || impl_->stopping) break;
    std::lock_guard lock(impl_->threadsMutex);
    impl_->sockets.push_back(socket);
    impl_->threads.emplace_back([this, socket] { impl_->connection(socket); });
  }
}

void TransportServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  boost::system::error_code ec;
  // Wake a blocking accept() with a throwaway connection.
  tcp::socket waker(impl_->io);
  waker.connect(impl_->acceptor.local_endpoint(), ec);
  std::lock_guard lock(impl_->threadsMutex);
  for (auto& socket : impl_->sockets) socket->shutdown(tcp::socket::shutdown_both, ec);
}

}  // namespace tgg
