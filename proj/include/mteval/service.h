#ifndef MTEVAL_SERVICE_H_
#define MTEVAL_SERVICE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mteval/corpus.h"
#include "mteval/human.h"

namespace mteval::service {

struct ItemKey {
  std::string system_id;
  std::string doc_id;
  int seg_id = 0;

  friend bool operator==(const ItemKey&, const ItemKey&) = default;
};

// For every document, each segment is followed by all systems' outputs for
// it; the starting system rotates with the segment index.
std::vector<ItemKey> AssignmentQueue(const Corpus& corpus);

struct AnnotationSession {
  std::string session_id;
  std::string judge_id;
  std::vector<ItemKey> queue;
  std::size_t cursor = 0;  // first item without a stored rating
};

struct Response {
  int status = 200;
  std::string body;  // JSON
};

// Transport-independent request handling. Session progress is derived from
// the rating store, so a restart that replays the log restores it.
class AnnotationService {
 public:
  AnnotationService(const Corpus& corpus, human::RatingStore& store);

  // Session ids equal judge ids. Opening twice returns the same session.
  std::string OpenSession(const std::string& judge_id);
  // Snapshot of a session with its cursor recomputed; nullptr if unknown.
  std::unique_ptr<AnnotationSession> Session(const std::string& session_id) const;

  Response CreateSession(const std::string& body);
  Response Next(const std::string& session_id) const;
  Response Submit(const std::string& session_id, const std::string& body);
  Response Progress(const std::string& session_id) const;

 private:
  std::size_t DoneCount(const AnnotationSession& session) const;

  const Corpus& corpus_;
  human::RatingStore& store_;
  std::vector<ItemKey> queue_;
  mutable std::mutex mu_;
  std::mutex submit_mu_;
  std::map<std::string, std::string> sessions_;  // session id -> judge id
};

// HTTP binding:
//   POST /api/session                 {"judge_id": ...}
//   GET  /api/session/{id}/next
//   POST /api/session/{id}/rating     RatingRecord
//   GET  /api/session/{id}/progress
class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service);
  ~HttpServer();

  // Returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  int BindToAnyPort(const std::string& host);
  // Blocks until Stop().
  bool Listen();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mteval::service

#endif  // MTEVAL_SERVICE_H_
