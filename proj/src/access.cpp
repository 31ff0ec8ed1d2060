#include "foggyedge/access.hpp"

#include <openssl/hmac.h>

#include <algorithm>

namespace foggyedge {

bool isValidVin(const std::string& vin)
{
  if (vin.size() != 17)
    return false;
  for (char c : vin) {
    bool ok = (c >= '0' && c <= '9') ||
              (c >= 'A' && c <= 'Z' && c != 'I' && c != 'O' && c != 'Q');
    if (!ok)
      return false;
  }
  return true;
}

std::string computeHmac(const std::string& vin, const FeName& name)
{
  if (!isValidVin(vin))
    throw InvalidVinError("invalid VIN: " + vin);

  std::string msg = name.canonicalWithoutParams();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digestLen = 0;
  if (HMAC(EVP_sha256(), vin.data(), static_cast<int>(vin.size()),
           reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
           digest, &digestLen) == nullptr)
    throw std::runtime_error("HMAC computation failed");

  static constexpr char HEX[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(digestLen * 2);
  for (unsigned int i = 0; i < digestLen; ++i) {
    hex += HEX[digest[i] >> 4];
    hex += HEX[digest[i] & 0x0F];
  }
  return hex;
}

void AccessStore::insert(const HmmRecord& r)
{
  m_records[r.hmac] = r;
}

const HmmRecord* AccessStore::find(const std::string& hmac) const
{
  auto it = m_records.find(hmac);
  return it == m_records.end() ? nullptr : &it->second;
}

std::vector<HmmRecord> AccessStore::allRecords() const
{
  std::vector<HmmRecord> out;
  out.reserve(m_records.size());
  for (const auto& [hmac, rec] : m_records)
    out.push_back(rec);
  std::sort(out.begin(), out.end(), [](const HmmRecord& a, const HmmRecord& b) {
    if (a.created_at != b.created_at)
      return a.created_at < b.created_at;
    return a.hmac < b.hmac;
  });
  return out;
}

std::vector<HmmRecord> AccessStore::recordsAfter(Tick t, std::size_t limit) const
{
  std::vector<HmmRecord> all = allRecords();
  std::vector<HmmRecord> out;
  for (const HmmRecord& r : all) {
    if (r.created_at > t) {
      out.push_back(r);
      if (out.size() == limit)
        break;
    }
  }
  return out;
}

bool AccessStore::hasRecordsAfter(Tick t) const
{
  for (const auto& [hmac, rec] : m_records)
    if (rec.created_at > t)
      return true;
  return false;
}

Verdict verify(const AccessStore& store, const Interest& i)
{
  if (!i.access_rights)
    return Verdict::Deny;
  const HmmRecord* rec = store.find(*i.access_rights);
  if (rec == nullptr)
    return Verdict::Deny;
  if (rec->microservice_name != i.name.canonicalWithoutParams())
    return Verdict::Deny;
  return Verdict::Allow;
}

SyncBatch syncStep(const AccessStore& cloud, Tick since, std::size_t batch_limit)
{
  SyncBatch out;
  out.records = cloud.recordsAfter(since, batch_limit);
  out.batch_max_time = since;
  for (const HmmRecord& r : out.records)
    out.batch_max_time = std::max(out.batch_max_time, r.created_at);
  if (out.records.size() == batch_limit) {
    // a batch may only end on a creation-time boundary: records sharing the
    // last timestamp ride along (the edge resumes from batch_max_time, so a
    // group split here would strand its tail forever)
    std::vector<HmmRecord> tail = cloud.recordsAfter(out.batch_max_time - 1, cloud.size());
    for (const HmmRecord& r : tail)
      if (r.created_at == out.batch_max_time &&
          std::find(out.records.begin(), out.records.end(), r) == out.records.end())
        out.records.push_back(r);
  }
  out.more = cloud.hasRecordsAfter(out.batch_max_time);
  return out;
}

void applyBatch(AccessStore& edge, const SyncBatch& batch)
{
  for (const HmmRecord& r : batch.records)
    edge.insert(r);
  edge.last_sync_time = std::max(edge.last_sync_time, batch.batch_max_time);
}

} // namespace foggyedge
