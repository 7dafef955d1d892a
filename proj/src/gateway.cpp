// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/gateway.hpp"

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <utility>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// A dead peer must surface as ScorerUnavailable, not kill the process.
void ignore_sigpipe() {
  static const bool once = [] {
    struct sigaction sa {};
    sa.sa_handler = SIG_IGN;
    ::sigaction(SIGPIPE, &sa, nullptr);
    return true;
  }();
  (void)once;
}

[[noreturn]] void throw_errno(const std::string& what) {
  throw ScorerUnavailable(what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const char* what) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(std::string(what) + " write failed");
    }
    off += static_cast<std::size_t>(n);
  }
}

/// Pulls one '\n'-terminated line out of buffer/fd, waiting at most
/// timeout_ms. An unterminated tail at EOF still counts as a line.
RecvStatus read_line_fd(int fd, std::string* buffer, bool* eof,
                        std::string* line, int timeout_ms, const char* what) {
  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    const std::size_t nl = buffer->find('\n');
    if (nl != std::string::npos) {
      line->assign(*buffer, 0, nl);
      buffer->erase(0, nl + 1);
      return RecvStatus::Line;
    }
    if (*eof) {
      if (!buffer->empty()) {
        line->swap(*buffer);
        buffer->clear();
        return RecvStatus::Line;
      }
      return RecvStatus::Eof;
    }
    if (fd < 0) return RecvStatus::Eof;
    const auto now = Clock::now();
    if (now >= deadline) return RecvStatus::Timeout;
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count();
    struct pollfd pfd {};
    pfd.fd = fd;
    pfd.events = POLLIN;
    const int pr = ::poll(&pfd, 1, static_cast<int>(remaining) + 1);
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw_errno(std::string(what) + " poll failed");
    }
    if (pr == 0) return RecvStatus::Timeout;
    char chunk[4096];
    const ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(std::string(what) + " read failed");
    }
    if (n == 0) {
      *eof = true;
      continue;
    }
    buffer->append(chunk, static_cast<std::size_t>(n));
  }
}

void close_quietly(int* fd) {
  if (*fd >= 0) {
    ::close(*fd);
    *fd = -1;
  }
}

}  // namespace

// ---- StdioTransport --------------------------------------------------------

StdioTransport::StdioTransport(const std::vector<std::string>& argv) {
  ignore_sigpipe();
  if (argv.empty()) {
    throw ConfigError("stdio gateway needs a non-empty command");
  }
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw_errno("pipe");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw_errno("pipe");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    throw_errno("fork");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) {
      args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  pid_ = pid;
  write_fd_ = to_child[1];
  read_fd_ = from_child[0];
  ::close(to_child[0]);
  ::close(from_child[1]);
}

StdioTransport::~StdioTransport() { close(); }

void StdioTransport::send_line(const std::string& line) {
  if (write_fd_ < 0) {
    throw ScorerUnavailable("gateway process connection already closed");
  }
  write_all(write_fd_, line + "\n", "gateway process");
}

RecvStatus StdioTransport::recv_line(std::string* line, int timeout_ms) {
  return read_line_fd(read_fd_, &buffer_, &eof_, line, timeout_ms,
                      "gateway process");
}

void StdioTransport::close() {
  close_quietly(&write_fd_);
  close_quietly(&read_fd_);
  if (pid_ > 0) {
    // Closing stdin asks the child to exit; give it a moment, then force.
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 20 && !reaped; ++i) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) {
        reaped = true;
        break;
      }
      ::usleep(100 * 1000);
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

// ---- TcpTransport ----------------------------------------------------------

TcpTransport::TcpTransport(const std::string& host, int port) {
  ignore_sigpipe();
  struct addrinfo hints {};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  struct addrinfo* res = nullptr;
  const std::string port_s = std::to_string(port);
  const int rc = ::getaddrinfo(host.c_str(), port_s.c_str(), &hints, &res);
  if (rc != 0) {
    throw ScorerUnavailable("cannot resolve gateway host \"" + host +
                            "\": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (struct addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw ScorerUnavailable("cannot connect to gateway at " + host + ":" +
                            port_s);
  }
  fd_ = fd;
}

TcpTransport::~TcpTransport() { close(); }

void TcpTransport::send_line(const std::string& line) {
  if (fd_ < 0) {
    throw ScorerUnavailable("gateway socket already closed");
  }
  write_all(fd_, line + "\n", "gateway socket");
}

RecvStatus TcpTransport::recv_line(std::string* line, int timeout_ms) {
  return read_line_fd(fd_, &buffer_, &eof_, line, timeout_ms,
                      "gateway socket");
}

void TcpTransport::close() { close_quietly(&fd_); }

// ---- Connection ------------------------------------------------------------

namespace {

GatewayResponse parse_response_line(const std::string& line) {
  json parsed;
  try {
    parsed = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ScorerUnavailable(std::string("malformed gateway response: ") +
                            e.what());
  }
  if (!parsed.is_object() || !parsed.contains("id") ||
      !parsed["id"].is_string()) {
    throw ScorerUnavailable("malformed gateway response: missing string id");
  }
  GatewayResponse resp;
  resp.id = parsed["id"].get<std::string>();
  const bool has_result = parsed.contains("result");
  const bool has_error = parsed.contains("error");
  if (has_result == has_error) {
    throw ScorerUnavailable(
        "malformed gateway response: need exactly one of result/error");
  }
  if (has_result) {
    resp.result = parsed["result"];
  } else {
    GatewayFault fault;
    fault.kind = "server";
    const json& err = parsed["error"];
    if (err.is_object()) {
      if (err.contains("code") && err["code"].is_number_integer()) {
        fault.code = err["code"].get<int>();
      }
      if (err.contains("message") && err["message"].is_string()) {
        fault.message = err["message"].get<std::string>();
      }
    }
    if (fault.message.empty()) fault.message = "server reported an error";
    resp.error = std::move(fault);
  }
  return resp;
}

}  // namespace

Connection::Connection(std::unique_ptr<Transport> transport, int timeout_ms)
    : transport_(std::move(transport)), timeout_ms_(timeout_ms) {
  if (!transport_) {
    throw InvalidArgumentError("connection needs a transport");
  }
  if (timeout_ms_ <= 0) {
    throw ConfigError("gateway timeout must be positive milliseconds");
  }
}

std::string Connection::next_id() { return std::to_string(++counter_); }

void Connection::send_request(const std::string& task, const std::string& id,
                              const ordered_json& payload) {
  ordered_json req;
  req["task"] = task;
  req["id"] = id;
  req["payload"] = payload;
  transport_->send_line(req.dump());
}

GatewayResponse Connection::request(const std::string& task,
                                    const ordered_json& payload) {
  const std::string id = next_id();
  send_request(task, id, payload);
  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
  for (;;) {
    const auto now = Clock::now();
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count();
    if (remaining <= 0) {
      throw ScorerUnavailable("gateway timed out after " +
                              std::to_string(timeout_ms_) + " ms");
    }
    std::string line;
    switch (transport_->recv_line(&line, static_cast<int>(remaining))) {
      case RecvStatus::Timeout:
        throw ScorerUnavailable("gateway timed out after " +
                                std::to_string(timeout_ms_) + " ms");
      case RecvStatus::Eof:
        throw ScorerUnavailable("gateway closed the connection");
      case RecvStatus::Line:
        break;
    }
    GatewayResponse resp = parse_response_line(line);
    if (orphaned_.erase(resp.id) > 0) continue;  // late reply, drop it
    if (resp.id != id) {
      throw ProtocolError("response id \"" + resp.id +
                          "\" does not match request id \"" + id + "\"");
    }
    return resp;
  }
}

std::vector<GatewaySlot> Connection::batch_request(
    const std::string& task, const std::vector<ordered_json>& payloads,
    std::size_t max_in_flight) {
  if (max_in_flight == 0) {
    throw ConfigError("max_in_flight must be at least 1");
  }
  const std::size_t n = payloads.size();
  std::vector<GatewaySlot> slots(n);
  std::map<std::string, std::size_t> pending;
  std::map<std::string, Clock::time_point> deadlines;
  std::size_t next_send = 0;
  bool transport_dead = false;

  const auto fault_all_pending = [&](const std::string& message) {
    for (const auto& [id, idx] : pending) {
      slots[idx].fault = GatewayFault{"transport", 0, message};
    }
    pending.clear();
    deadlines.clear();
  };

  const auto send_more = [&] {
    while (!transport_dead && next_send < n &&
           pending.size() < max_in_flight) {
      const std::size_t idx = next_send++;
      const std::string id = next_id();
      try {
        send_request(task, id, payloads[idx]);
      } catch (const Error& e) {
        slots[idx].fault = GatewayFault{"transport", 0, e.what()};
        transport_dead = true;
        return;
      }
      pending[id] = idx;
      deadlines[id] = Clock::now() + std::chrono::milliseconds(timeout_ms_);
    }
  };

  send_more();
  while (!pending.empty()) {
    const auto min_it = std::min_element(
        deadlines.begin(), deadlines.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    const std::string expiring_id = min_it->first;
    const auto now = Clock::now();
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                               min_it->second - now)
                               .count();
    const int wait_ms = remaining > 0 ? static_cast<int>(remaining) : 0;

    std::string line;
    RecvStatus st;
    try {
      st = transport_->recv_line(&line, wait_ms);
    } catch (const Error& e) {
      fault_all_pending(e.what());
      transport_dead = true;
      break;
    }
    if (st == RecvStatus::Timeout) {
      slots[pending[expiring_id]].fault = GatewayFault{
          "timeout", 0,
          "no response within " + std::to_string(timeout_ms_) + " ms"};
      orphaned_.insert(expiring_id);
      pending.erase(expiring_id);
      deadlines.erase(expiring_id);
      send_more();
      continue;
    }
    if (st == RecvStatus::Eof) {
      fault_all_pending("gateway closed the connection");
      transport_dead = true;
      break;
    }
    GatewayResponse resp;
    try {
      resp = parse_response_line(line);
    } catch (const Error& e) {
      fault_all_pending(e.what());
      transport_dead = true;
      break;
    }
    if (orphaned_.erase(resp.id) > 0) continue;
    const auto it = pending.find(resp.id);
    if (it == pending.end()) {
      throw ProtocolError("gateway replied with unknown id \"" + resp.id +
                          "\"");
    }
    const std::size_t idx = it->second;
    if (resp.error) {
      slots[idx].fault = std::move(resp.error);
    } else {
      slots[idx].result = std::move(resp.result);
    }
    pending.erase(it);
    deadlines.erase(resp.id);
    send_more();
  }
  for (std::size_t i = next_send; i < n; ++i) {
    if (!slots[i].result && !slots[i].fault) {
      slots[i].fault = GatewayFault{
          "transport", 0, "connection failed before the request was sent"};
    }
  }
  return slots;
}

// ---- Endpoint / pool -------------------------------------------------------

std::unique_ptr<Transport> open_transport(const std::string& endpoint) {
  const std::string trimmed = text::trim(endpoint);
  if (trimmed.empty()) {
    throw ConfigError("empty gateway endpoint");
  }
  const std::size_t colon = trimmed.rfind(':');
  if (colon != std::string::npos && colon > 0 &&
      trimmed.find(' ') == std::string::npos) {
    const std::string port_s = trimmed.substr(colon + 1);
    const bool numeric =
        !port_s.empty() &&
        std::all_of(port_s.begin(), port_s.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; });
    if (numeric) {
      return std::make_unique<TcpTransport>(trimmed.substr(0, colon),
                                            std::stoi(port_s));
    }
  }
  return std::make_unique<StdioTransport>(text::whitespace_tokens(trimmed));
}

ConnectionPool::ConnectionPool(Factory factory, std::size_t size)
    : factory_(std::move(factory)), capacity_(size) {
  if (!factory_) {
    throw InvalidArgumentError("connection pool needs a factory");
  }
  if (capacity_ == 0) {
    throw ConfigError("connection pool size must be at least 1");
  }
}

ConnectionPool::Lease::Lease(ConnectionPool& pool,
                             std::unique_ptr<Connection> conn)
    : pool_(pool), conn_(std::move(conn)) {}

ConnectionPool::Lease::~Lease() { pool_.release(std::move(conn_)); }

ConnectionPool::Lease ConnectionPool::acquire() {
  std::unique_lock<std::mutex> lock(mutex_);
  for (;;) {
    if (!idle_.empty()) {
      std::unique_ptr<Connection> conn = std::move(idle_.back());
      idle_.pop_back();
      return Lease(*this, std::move(conn));
    }
    if (created_ < capacity_) {
      ++created_;
      lock.unlock();
      std::unique_ptr<Connection> conn;
      try {
        conn = factory_();
      } catch (...) {
        std::lock_guard<std::mutex> relock(mutex_);
        --created_;
        available_.notify_one();
        throw;
      }
      return Lease(*this, std::move(conn));
    }
    available_.wait(lock);
  }
}

void ConnectionPool::release(std::unique_ptr<Connection> conn) {
  if (!conn) return;
  std::lock_guard<std::mutex> lock(mutex_);
  idle_.push_back(std::move(conn));
  available_.notify_one();
}

std::shared_ptr<ConnectionPool> make_gateway_pool(const std::string& endpoint,
                                                  std::size_t size,
                                                  int timeout_ms) {
  return std::make_shared<ConnectionPool>(
      [endpoint, timeout_ms] {
        return std::make_unique<Connection>(open_transport(endpoint),
                                            timeout_ms);
      },
      size);
}

// ---- Adaptors --------------------------------------------------------------

namespace {

[[noreturn]] void throw_fault(const GatewayFault& fault, bool generator) {
  std::string msg = "gateway " + fault.kind + " error";
  if (fault.code != 0) msg += " (code " + std::to_string(fault.code) + ")";
  msg += ": " + fault.message;
  if (generator) throw GeneratorUnavailable(msg);
  throw ScorerUnavailable(msg);
}

double number_result(const GatewayResponse& resp) {
  if (resp.error) throw_fault(*resp.error, false);
  if (!resp.result || !resp.result->is_number()) {
    throw ProtocolError("score result must be a number");
  }
  return resp.result->get<double>();
}

}  // namespace

GatewayTextScorer::GatewayTextScorer(std::shared_ptr<ConnectionPool> pool)
    : pool_(std::move(pool)) {
  if (!pool_) {
    throw InvalidArgumentError("gateway scorer needs a connection pool");
  }
}

double GatewayTextScorer::score(const std::string& utterance) const {
  ConnectionPool::Lease lease = pool_->acquire();
  ordered_json payload;
  payload["text"] = utterance;
  return number_result(lease.get().request("score", payload));
}

GatewayDomainScorer::GatewayDomainScorer(std::shared_ptr<ConnectionPool> pool)
    : pool_(std::move(pool)) {
  if (!pool_) {
    throw InvalidArgumentError("gateway scorer needs a connection pool");
  }
}

std::array<double, kDomainClassCount> GatewayDomainScorer::distribution(
    const std::string& context_text) const {
  ConnectionPool::Lease lease = pool_->acquire();
  ordered_json payload;
  payload["context"] = context_text;
  const GatewayResponse resp = lease.get().request("classify_domain", payload);
  if (resp.error) throw_fault(*resp.error, false);
  if (!resp.result || !resp.result->is_array() ||
      resp.result->size() != kDomainClassCount) {
    throw ProtocolError("classify_domain result must be an array of " +
                        std::to_string(kDomainClassCount) + " numbers");
  }
  std::array<double, kDomainClassCount> out{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kDomainClassCount; ++i) {
    const auto& v = (*resp.result)[i];
    if (!v.is_number()) {
      throw ProtocolError("classify_domain result must be numeric");
    }
    out[i] = v.get<double>();
    if (out[i] < 0.0) {
      throw ProtocolError("classify_domain scores must be non-negative");
    }
    sum += out[i];
  }
  if (sum <= 0.0) {
    throw ProtocolError("classify_domain scores must not all be zero");
  }
  for (double& v : out) v /= sum;
  return out;
}

GatewayKnowledgeScorer::GatewayKnowledgeScorer(
    std::shared_ptr<ConnectionPool> pool, std::size_t max_in_flight)
    : pool_(std::move(pool)), max_in_flight_(max_in_flight) {
  if (!pool_) {
    throw InvalidArgumentError("gateway scorer needs a connection pool");
  }
  if (max_in_flight_ == 0) {
    throw ConfigError("max_in_flight must be at least 1");
  }
}

double GatewayKnowledgeScorer::score(const RankInput& input) const {
  ConnectionPool::Lease lease = pool_->acquire();
  ordered_json payload;
  payload["text"] = flatten_input(input);
  return number_result(lease.get().request("score", payload));
}

std::vector<double> GatewayKnowledgeScorer::score_batch(
    const std::vector<RankInput>& inputs) const {
  std::vector<ordered_json> payloads;
  payloads.reserve(inputs.size());
  for (const RankInput& input : inputs) {
    ordered_json payload;
    payload["text"] = flatten_input(input);
    payloads.push_back(std::move(payload));
  }
  ConnectionPool::Lease lease = pool_->acquire();
  const std::vector<GatewaySlot> slots =
      lease.get().batch_request("score", payloads, max_in_flight_);
  std::vector<double> out;
  out.reserve(slots.size());
  for (const GatewaySlot& slot : slots) {
    // Ranking needs every candidate's score; one bad slot fails the turn.
    if (slot.fault) throw_fault(*slot.fault, false);
    if (!slot.result || !slot.result->is_number()) {
      throw ProtocolError("score result must be a number");
    }
    out.push_back(slot.result->get<double>());
  }
  return out;
}

GatewayGenerator::GatewayGenerator(std::shared_ptr<ConnectionPool> pool)
    : pool_(std::move(pool)) {
  if (!pool_) {
    throw InvalidArgumentError("gateway generator needs a connection pool");
  }
}

std::string GatewayGenerator::generate(const std::string& context_text,
                                       const std::string& answer) const {
  if (text::trim(answer).empty()) {
    throw InvalidArgumentError("response generation needs a non-empty answer");
  }
  ConnectionPool::Lease lease = pool_->acquire();
  ordered_json payload;
  payload["context"] = context_text;
  payload["answer"] = answer;
  GatewayResponse resp;
  try {
    resp = lease.get().request("generate", payload);
  } catch (const ScorerUnavailable& e) {
    // Re-kind transport failures for the generation stage, without the
    // original kind prefix baked into what().
    const std::string what = e.what();
    const std::size_t sep = what.find(": ");
    throw GeneratorUnavailable(sep == std::string::npos
                                   ? what
                                   : what.substr(sep + 2));
  }
  if (resp.error) throw_fault(*resp.error, true);
  if (!resp.result || !resp.result->is_string()) {
    throw ProtocolError("generate result must be a string");
  }
  return resp.result->get<std::string>();
}

}  // namespace kgdial
