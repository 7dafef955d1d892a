// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgdial/detector.hpp"
#include "kgdial/domain.hpp"
#include "kgdial/generator.hpp"
#include "kgdial/ranker.hpp"

namespace kgdial {

/// Wire protocol: one JSON object per line, UTF-8, no pretty-printing.
/// Request:  {"task":"score"|"classify_domain"|"generate","id":"<unique>",
///            "payload":{...}}
///   payloads: score {"text"}; classify_domain {"context"};
///             generate {"context","answer"}
/// Response: {"id":"<echo>","result":...} or
///           {"id":"<echo>","error":{"code":int,"message":str}}
///   results: score -> number; classify_domain -> [p_train,p_taxi,p_others];
///            generate -> string.

enum class RecvStatus { Line, Timeout, Eof };

/// Line-oriented byte transport. send_line appends the newline itself;
/// recv_line strips it. Transport failures throw ScorerUnavailable.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send_line(const std::string& line) = 0;
  virtual RecvStatus recv_line(std::string* line, int timeout_ms) = 0;
  virtual void close() = 0;
};

/// Child process speaking the protocol on its stdin/stdout. The argv
/// vector is exec'd directly, no shell involved.
class StdioTransport final : public Transport {
 public:
  explicit StdioTransport(const std::vector<std::string>& argv);
  ~StdioTransport() override;
  void send_line(const std::string& line) override;
  RecvStatus recv_line(std::string* line, int timeout_ms) override;
  void close() override;

 private:
  int pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

class TcpTransport final : public Transport {
 public:
  TcpTransport(const std::string& host, int port);
  ~TcpTransport() override;
  void send_line(const std::string& line) override;
  RecvStatus recv_line(std::string* line, int timeout_ms) override;
  void close() override;

 private:
  int fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

struct GatewayFault {
  /// "timeout", "transport", "server", or "protocol".
  std::string kind;
  int code = 0;  // server-reported code when kind == "server"
  std::string message;
};

struct GatewayResponse {
  std::string id;
  std::optional<nlohmann::json> result;
  std::optional<GatewayFault> error;
};

/// One outcome slot of a batch; exactly one of result/fault is set.
struct GatewaySlot {
  std::optional<nlohmann::json> result;
  std::optional<GatewayFault> fault;
};

/// A single protocol session over one transport. Not thread-safe; one
/// owner at a time (see ConnectionPool).
class Connection {
 public:
  explicit Connection(std::unique_ptr<Transport> transport,
                      int timeout_ms = 5000);

  /// One request, one response. Timeout / transport failure / malformed
  /// response → ScorerUnavailable; response id not matching → ProtocolError.
  /// Server-reported errors come back in the response object.
  GatewayResponse request(const std::string& task,
                          const nlohmann::ordered_json& payload);

  /// Pipelines up to max_in_flight outstanding requests and returns slots
  /// in request order. Per-request failures (timeout, server error) land
  /// in their slot; a response with an id never issued → ProtocolError.
  std::vector<GatewaySlot> batch_request(
      const std::string& task,
      const std::vector<nlohmann::ordered_json>& payloads,
      std::size_t max_in_flight);

  int timeout_ms() const { return timeout_ms_; }

 private:
  std::string next_id();
  void send_request(const std::string& task, const std::string& id,
                    const nlohmann::ordered_json& payload);

  std::unique_ptr<Transport> transport_;
  int timeout_ms_;
  std::uint64_t counter_ = 0;
  /// Ids whose slot already timed out; their late replies are discarded.
  std::set<std::string> orphaned_;
};

/// Endpoint grammar: "host:port" (pure numeric port) opens TCP; anything
/// else is split on spaces and spawned as a child process.
std::unique_ptr<Transport> open_transport(const std::string& endpoint);

/// Fixed-size pool of lazily opened connections; acquire blocks until one
/// is free. Concurrency model: one connection, one worker at a time.
class ConnectionPool {
 public:
  using Factory = std::function<std::unique_ptr<Connection>()>;
  ConnectionPool(Factory factory, std::size_t size);

  class Lease {
   public:
    Lease(ConnectionPool& pool, std::unique_ptr<Connection> conn);
    ~Lease();
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    Connection& get() { return *conn_; }

   private:
    ConnectionPool& pool_;
    std::unique_ptr<Connection> conn_;
  };

  Lease acquire();

 private:
  friend class Lease;
  void release(std::unique_ptr<Connection> conn);

  Factory factory_;
  std::size_t capacity_;
  std::size_t created_ = 0;
  std::vector<std::unique_ptr<Connection>> idle_;
  std::mutex mutex_;
  std::condition_variable available_;
};

/// Convenience: pool over open_transport(endpoint).
std::shared_ptr<ConnectionPool> make_gateway_pool(const std::string& endpoint,
                                                  std::size_t size,
                                                  int timeout_ms);

// ---- Scorer/generator adaptors -------------------------------------------
// Each adaptor leases a connection per call (or per batch), maps server
// errors onto ScorerUnavailable / GeneratorUnavailable, and malformed
// result shapes onto ProtocolError.

class GatewayTextScorer final : public TextScorer {
 public:
  explicit GatewayTextScorer(std::shared_ptr<ConnectionPool> pool);
  double score(const std::string& utterance) const override;

 private:
  std::shared_ptr<ConnectionPool> pool_;
};

class GatewayDomainScorer final : public DomainScorer {
 public:
  explicit GatewayDomainScorer(std::shared_ptr<ConnectionPool> pool);
  std::array<double, kDomainClassCount> distribution(
      const std::string& context_text) const override;

 private:
  std::shared_ptr<ConnectionPool> pool_;
};

class GatewayKnowledgeScorer final : public KnowledgeScorer {
 public:
  GatewayKnowledgeScorer(std::shared_ptr<ConnectionPool> pool,
                         std::size_t max_in_flight = 32);
  double score(const RankInput& input) const override;
  std::vector<double> score_batch(
      const std::vector<RankInput>& inputs) const override;

 private:
  std::shared_ptr<ConnectionPool> pool_;
  std::size_t max_in_flight_;
};

class GatewayGenerator final : public ResponseGenerator {
 public:
  explicit GatewayGenerator(std::shared_ptr<ConnectionPool> pool);
  std::string generate(const std::string& context_text,
                       const std::string& answer) const override;

 private:
  std::shared_ptr<ConnectionPool> pool_;
};

}  // namespace kgdial
