#ifndef FOGGYEDGE_ACCESS_HPP
#define FOGGYEDGE_ACCESS_HPP

#include "foggyedge/packet.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foggyedge {

class InvalidVinError : public std::runtime_error {
public:
  explicit InvalidVinError(const std::string& what)
    : std::runtime_error(what) {}
};

/// 17 characters, uppercase alphanumeric, excluding I, O, and Q.
bool isValidVin(const std::string& vin);

/// HMAC-SHA-256 over the canonical name (params stripped) keyed by the VIN.
/// Returns the digest as lowercase hex. Throws InvalidVinError on a bad VIN.
std::string computeHmac(const std::string& vin, const FeName& name);

enum class Verdict { Allow, Deny };

/** @brief HMAC-to-microservice-name mapping store (one per edge, one at the cloud).
 *
 * Keys are hex digests; each maps to the microservice name it grants and the time
 * the grant was created. last_sync_time tracks how far this store has caught up
 * with the cloud's registry.
 */
class AccessStore {
public:
  /// Insert or overwrite a record.
  void insert(const HmmRecord& r);

  const HmmRecord* find(const std::string& hmac) const;

  std::size_t size() const { return m_records.size(); }

  /// Records with created_at > t, ordered by (created_at, hmac), at most `limit`.
  std::vector<HmmRecord> recordsAfter(Tick t, std::size_t limit) const;

  /// True if any record has created_at > t.
  bool hasRecordsAfter(Tick t) const;

  /// All records, ordered by (created_at, hmac).
  std::vector<HmmRecord> allRecords() const;

  Tick last_sync_time = 0;

private:
  std::map<std::string, HmmRecord> m_records; // hmac -> record
};

/// Access verdict for an Interest at an edge: Allow if the Interest carries a
/// digest that maps, in `store`, to exactly the microservice being requested
/// (params stripped). A protected request without a digest, with an unknown
/// digest, or with a digest bound to a different name is denied.
Verdict verify(const AccessStore& store, const Interest& i);

struct SyncBatch {
  std::vector<HmmRecord> records;
  Tick batch_max_time = 0;  // max created_at in the batch; == requested T when empty
  bool more = false;        // records beyond this batch remain
};

/// Cloud-side half of the HMM sync protocol: the next batch of records created
/// after `since`, capped at `batch_limit`, with a flag telling the edge whether
/// another round is needed.
SyncBatch syncStep(const AccessStore& cloud, Tick since, std::size_t batch_limit);

/// Edge-side half: merge a received batch (idempotent) and advance last_sync_time
/// to the batch's max creation time.
void applyBatch(AccessStore& edge, const SyncBatch& batch);

} // namespace foggyedge

#endif // FOGGYEDGE_ACCESS_HPP
