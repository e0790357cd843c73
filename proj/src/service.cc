#include "mteval/service.h"

#include <chrono>
#include <ctime>

#include "httplib.h"
#include "json.hpp"
#include "mteval/error.h"

namespace mteval::service {
namespace {

using ordered_json = nlohmann::ordered_json;

Response Json(int status, const ordered_json& body) {
  return {status, body.dump(-1, ' ', false, ordered_json::error_handler_t::replace)};
}

Response Error(int status, std::string_view code, const std::string& message) {
  ordered_json body;
  body["error"] = code;
  body["message"] = message;
  return Json(status, body);
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kOutOfRangeRating:
    case ErrorCode::kMissingCriterion:
      return 422;
    case ErrorCode::kUnknownSegment:
      return 409;
    default:
      return 500;
  }
}

std::string UtcNow() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json ProgressJson(std::size_t done, std::size_t total) {
  ordered_json p;
  p["done"] = done;
  p["total"] = total;
  return p;
}

}  // namespace

std::vector<ItemKey> AssignmentQueue(const Corpus& corpus) {
  std::vector<ItemKey> queue;
  const auto& systems = corpus.systems();
  if (systems.empty()) return queue;
  for (const auto& doc : corpus.documents()) {
    for (std::size_t s = 0; s < doc.segments.size(); ++s) {
      const Segment& seg = doc.segments[s];
      for (std::size_t k = 0; k < systems.size(); ++k) {
        const auto& sys = systems[(s + k) % systems.size()];
        queue.push_back({sys.system_id, seg.doc_id, seg.seg_id});
      }
    }
  }
  return queue;
}

AnnotationService::AnnotationService(const Corpus& corpus,
                                     human::RatingStore& store)
    : corpus_(corpus), store_(store), queue_(AssignmentQueue(corpus)) {}

std::string AnnotationService::OpenSession(const std::string& judge_id) {
  if (judge_id.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "empty judge id");
  }
  std::lock_guard lock(mu_);
  sessions_.emplace(judge_id, judge_id);
  return judge_id;
}

std::size_t AnnotationService::DoneCount(const AnnotationSession& session) const {
  std::size_t done = 0;
  for (const auto& item : session.queue) {
    if (store_.Contains({session.judge_id, item.system_id, item.doc_id, item.seg_id})) {
      ++done;
    }
  }
  return done;
}

std::unique_ptr<AnnotationSession> AnnotationService::Session(
    const std::string& session_id) const {
  std::string judge;
  {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return nullptr;
    judge = it->second;
  }
  auto session = std::make_unique<AnnotationSession>();
  session->session_id = session_id;
  session->judge_id = judge;
  session->queue = queue_;
  session->cursor = session->queue.size();
  for (std::size_t i = 0; i < session->queue.size(); ++i) {
    const auto& item = session->queue[i];
    if (!store_.Contains({judge, item.system_id, item.doc_id, item.seg_id})) {
      session->cursor = i;
      break;
    }
  }
  return session;
}

Response AnnotationService::CreateSession(const std::string& body) {
  std::string judge;
  try {
    judge = ordered_json::parse(body).at("judge_id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    return Error(400, "ParseError", e.what());
  }
  if (judge.empty()) return Error(400, "InvalidArgument", "empty judge_id");
  ordered_json out;
  out["session_id"] = OpenSession(judge);
  return Json(200, out);
}

Response AnnotationService::Next(const std::string& session_id) const {
  const auto session = Session(session_id);
  if (!session) return Error(404, "UnknownSession", "no session " + session_id);
  const std::size_t total = session->queue.size();
  ordered_json out;
  out["session_id"] = session_id;
  if (session->cursor >= total) {
    out["complete"] = true;
    out["progress"] = ProgressJson(DoneCount(*session), total);
    return Json(200, out);
  }
  const ItemKey& item = session->queue[session->cursor];
  const Segment* seg = corpus_.FindSegment({item.doc_id, item.seg_id});
  const SystemOutput* sys = corpus_.FindSystem(item.system_id);
  out["complete"] = false;
  // The UI displays source and hypothesis only; the key is echoed back on
  // submit.
  ordered_json key;
  key["judge_id"] = session->judge_id;
  key["system_id"] = item.system_id;
  key["doc_id"] = item.doc_id;
  key["seg_id"] = item.seg_id;
  out["item"] = key;
  out["source"] = seg->source;
  out["hypothesis"] = sys->hypotheses.at(seg->key());
  ordered_json criteria = ordered_json::array();
  for (const auto& c : human::Rubric()) {
    ordered_json cj;
    cj["index"] = c.index;
    cj["short_name"] = c.short_name;
    cj["description_hi"] = c.description_hi;
    cj["description_en"] = c.description_en;
    criteria.push_back(cj);
  }
  out["criteria"] = criteria;
  out["progress"] = ProgressJson(DoneCount(*session), total);
  return Json(200, out);
}

Response AnnotationService::Submit(const std::string& session_id,
                                   const std::string& body) {
  // The cursor check and the append happen under one lock.
  std::lock_guard submit_lock(submit_mu_);

  const auto session = Session(session_id);
  if (!session) return Error(404, "UnknownSession", "no session " + session_id);

  human::RatingRecord record;
  try {
    record = human::ParseRecord(body);
  } catch (const EvalError& e) {
    return Error(400, ErrorCodeName(e.code()), e.what());
  }
  if (record.judge_id != session->judge_id) {
    return Error(400, "InvalidArgument", "judge_id does not match the session");
  }
  if (session->cursor >= session->queue.size()) {
    return Error(409, "NotCurrentItem", "session is complete");
  }
  const ItemKey& current = session->queue[session->cursor];
  if (!(ItemKey{record.system_id, record.doc_id, record.seg_id} == current)) {
    return Error(409, "NotCurrentItem",
                 "current item is " + current.system_id + " " + current.doc_id +
                     ":" + std::to_string(current.seg_id));
  }
  if (record.timestamp.empty()) record.timestamp = UtcNow();

  std::size_t id = 0;
  try {
    id = store_.ValidateAndStore(record);
  } catch (const EvalError& e) {
    return Error(StatusFor(e.code()), ErrorCodeName(e.code()), e.what());
  }
  ordered_json out;
  out["record_id"] = id;
  out["progress"] = ProgressJson(DoneCount(*session), session->queue.size());
  return Json(200, out);
}

Response AnnotationService::Progress(const std::string& session_id) const {
  const auto session = Session(session_id);
  if (!session) return Error(404, "UnknownSession", "no session " + session_id);
  return Json(200, ProgressJson(DoneCount(*session), session->queue.size()));
}

struct HttpServer::Impl {
  explicit Impl(AnnotationService& s) : service(s) {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json; charset=utf-8");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type, Authorization"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Post("/api/session", [this, reply](const httplib::Request& req,
                                             httplib::Response& res) {
      reply(res, service.CreateSession(req.body));
    });
    server.Get(R"(/api/session/([^/]+)/next)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.Next(req.matches[1]));
               });
    server.Post(R"(/api/session/([^/]+)/rating)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.Submit(req.matches[1], req.body));
                });
    server.Get(R"(/api/session/([^/]+)/progress)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.Progress(req.matches[1]));
               });
  }

  AnnotationService& service;
  httplib::Server server;
};

HttpServer::HttpServer(AnnotationService& service)
    : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

int HttpServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::Listen() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace mteval::service
