#include "foggyedge/packet.hpp"

#include <sstream>

namespace foggyedge {

namespace {

// TLV field types. Order of emission is fixed; decode enforces it so that
// every packet has exactly one wire form.
constexpr std::uint8_t TLV_INTEREST = 0x10;
constexpr std::uint8_t TLV_DATA = 0x11;

constexpr std::uint8_t TLV_NAME = 0x01;
constexpr std::uint8_t TLV_NONCE = 0x02;
constexpr std::uint8_t TLV_ACCESS_RIGHTS = 0x03;
constexpr std::uint8_t TLV_IFLAGS = 0x04;
constexpr std::uint8_t TLV_HOP_BUDGET = 0x05;
constexpr std::uint8_t TLV_LAST_SYNC = 0x06;
constexpr std::uint8_t TLV_ADMISSION = 0x07;

constexpr std::uint8_t TLV_KIND = 0x20;
constexpr std::uint8_t TLV_DFLAGS = 0x21;
constexpr std::uint8_t TLV_PAYLOAD = 0x22;

class Writer {
public:
  void u8(std::uint8_t v) { m_buf.push_back(v); }

  void u16(std::uint16_t v)
  {
    m_buf.push_back(static_cast<std::uint8_t>(v >> 8));
    m_buf.push_back(static_cast<std::uint8_t>(v));
  }

  void u32(std::uint32_t v)
  {
    for (int s = 24; s >= 0; s -= 8)
      m_buf.push_back(static_cast<std::uint8_t>(v >> s));
  }

  void u64(std::uint64_t v)
  {
    for (int s = 56; s >= 0; s -= 8)
      m_buf.push_back(static_cast<std::uint8_t>(v >> s));
  }

  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

  void str16(const std::string& s)
  {
    if (s.size() > 0xFFFF)
      throw DecodeError("string too long to encode");
    u16(static_cast<std::uint16_t>(s.size()));
    m_buf.insert(m_buf.end(), s.begin(), s.end());
  }

  void tlv(std::uint8_t type, const std::vector<std::uint8_t>& value)
  {
    if (value.size() > 0xFFFF)
      throw DecodeError("TLV value too long to encode");
    u8(type);
    u16(static_cast<std::uint16_t>(value.size()));
    m_buf.insert(m_buf.end(), value.begin(), value.end());
  }

  std::vector<std::uint8_t> take() { return std::move(m_buf); }

private:
  std::vector<std::uint8_t> m_buf;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> s)
    : m_data(s) {}

  bool atEnd() const { return m_pos == m_data.size(); }

  std::uint8_t u8()
  {
    need(1);
    return m_data[m_pos++];
  }

  std::uint16_t u16()
  {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(m_data[m_pos] << 8 | m_data[m_pos + 1]);
    m_pos += 2;
    return v;
  }

  std::uint32_t u32()
  {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v = v << 8 | m_data[m_pos + i];
    m_pos += 4;
    return v;
  }

  std::uint64_t u64()
  {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v = v << 8 | m_data[m_pos + i];
    m_pos += 8;
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  std::string str16()
  {
    std::uint16_t len = u16();
    need(len);
    std::string s(reinterpret_cast<const char*>(m_data.data() + m_pos), len);
    m_pos += len;
    return s;
  }

  std::span<const std::uint8_t> tlvValue(std::uint8_t expectedType)
  {
    std::uint8_t t = u8();
    if (t != expectedType)
      throw DecodeError("unexpected TLV type");
    std::uint16_t len = u16();
    need(len);
    std::span<const std::uint8_t> v = m_data.subspan(m_pos, len);
    m_pos += len;
    return v;
  }

  std::uint8_t peekType()
  {
    need(1);
    return m_data[m_pos];
  }

private:
  void need(std::size_t n) const
  {
    if (m_data.size() - m_pos < n)
      throw DecodeError("truncated packet");
  }

  std::span<const std::uint8_t> m_data;
  std::size_t m_pos = 0;
};

std::vector<std::uint8_t> encodePayload(const Payload& p)
{
  Writer w;
  std::visit(
    [&](const auto& v) {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, ComputedResult>) {
        w.u32(v.producer_node);
      }
      else if constexpr (std::is_same_v<T, MicroserviceCode>) {
        w.str16(v.microservice);
        w.u64(v.code_size_bytes);
      }
      else if constexpr (std::is_same_v<T, HmmBatch>) {
        w.i64(v.batch_max_time);
        if (v.records.size() > 0xFFFF)
          throw DecodeError("HMM batch too large to encode");
        w.u16(static_cast<std::uint16_t>(v.records.size()));
        for (const HmmRecord& r : v.records) {
          w.str16(r.hmac);
          w.str16(r.microservice_name);
          w.i64(r.created_at);
        }
      }
      else if constexpr (std::is_same_v<T, SlotAssignment>) {
        w.str16(v.vin);
        w.u8(v.accepted ? 1 : 0);
        w.u32(v.slot);
      }
      else if constexpr (std::is_same_v<T, HandoverTarget>) {
        w.str16(v.from_vin);
        w.str16(v.target_vin);
        w.str16(v.microservice);
        w.str16(v.request_name);
        w.u64(v.remaining_work);
        w.u8(v.adhoc_response ? 1 : 0);
        w.u64(v.state_bytes);
      }
    },
    p);
  return w.take();
}

Payload decodePayload(PayloadKind kind, std::span<const std::uint8_t> body)
{
  Reader r(body);
  Payload out;
  switch (kind) {
    case PayloadKind::ComputedResult: {
      ComputedResult v;
      v.producer_node = r.u32();
      out = v;
      break;
    }
    case PayloadKind::MicroserviceCode: {
      MicroserviceCode v;
      v.microservice = r.str16();
      v.code_size_bytes = r.u64();
      out = v;
      break;
    }
    case PayloadKind::HmmBatch: {
      HmmBatch v;
      v.batch_max_time = r.i64();
      std::uint16_t count = r.u16();
      v.records.reserve(count);
      for (std::uint16_t i = 0; i < count; ++i) {
        HmmRecord rec;
        rec.hmac = r.str16();
        rec.microservice_name = r.str16();
        rec.created_at = r.i64();
        v.records.push_back(std::move(rec));
      }
      out = v;
      break;
    }
    case PayloadKind::SlotAssignment: {
      SlotAssignment v;
      v.vin = r.str16();
      v.accepted = r.u8() != 0;
      v.slot = r.u32();
      out = v;
      break;
    }
    case PayloadKind::HandoverTarget: {
      HandoverTarget v;
      v.from_vin = r.str16();
      v.target_vin = r.str16();
      v.microservice = r.str16();
      v.request_name = r.str16();
      v.remaining_work = r.u64();
      v.adhoc_response = r.u8() != 0;
      v.state_bytes = r.u64();
      out = v;
      break;
    }
    default:
      throw DecodeError("unknown payload kind");
  }
  if (!r.atEnd())
    throw DecodeError("trailing bytes in payload");
  return out;
}

std::vector<std::uint8_t> single(std::uint8_t b)
{
  return {b};
}

std::vector<std::uint8_t> strBytes(const std::string& s)
{
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

std::vector<std::uint8_t> u64Bytes(std::uint64_t v)
{
  Writer w;
  w.u64(v);
  return w.take();
}

} // namespace

std::vector<std::uint8_t> encode(const Interest& i)
{
  Writer inner;
  {
    Writer w;
    w.tlv(TLV_NAME, strBytes(i.name.canonical()));
    w.tlv(TLV_NONCE, u64Bytes(i.nonce));
    if (i.access_rights)
      w.tlv(TLV_ACCESS_RIGHTS, strBytes(*i.access_rights));
    std::uint8_t flags = 0;
    if (i.offloading)
      flags |= 0x01;
    if (i.adhoc_response)
      flags |= 0x02;
    if (i.microservice_availability)
      flags |= 0x04;
    w.tlv(TLV_IFLAGS, single(flags));
    w.tlv(TLV_HOP_BUDGET, single(i.hop_budget));
    if (i.last_sync_time)
      w.tlv(TLV_LAST_SYNC, u64Bytes(static_cast<std::uint64_t>(*i.last_sync_time)));
    if (i.admission_info) {
      Writer adm;
      adm.i64(i.admission_info->estimated_parking_ticks);
      adm.u64(i.admission_info->available_resources);
      w.tlv(TLV_ADMISSION, adm.take());
    }
    inner = std::move(w);
  }
  Writer outer;
  outer.tlv(TLV_INTEREST, inner.take());
  return outer.take();
}

std::vector<std::uint8_t> encode(const Data& d)
{
  Writer w;
  w.tlv(TLV_NAME, strBytes(d.name.canonical()));
  w.tlv(TLV_KIND, single(static_cast<std::uint8_t>(d.kind)));
  std::uint8_t flags = 0;
  if (d.adhoc_response)
    flags |= 0x01;
  if (d.microservice_fetch)
    flags |= 0x02;
  if (d.more_access_rights)
    flags |= 0x04;
  w.tlv(TLV_DFLAGS, single(flags));
  w.tlv(TLV_PAYLOAD, encodePayload(d.payload));

  Writer outer;
  outer.tlv(TLV_DATA, w.take());
  return outer.take();
}

std::vector<std::uint8_t> encode(const Packet& p)
{
  return std::visit([](const auto& v) { return encode(v); }, p);
}

namespace {

FeName decodeName(std::span<const std::uint8_t> v)
{
  std::string raw(reinterpret_cast<const char*>(v.data()), v.size());
  std::optional<FeName> n = tryParseName(raw);
  if (!n)
    throw DecodeError("malformed name in packet: " + raw);
  return *n;
}

Interest decodeInterest(std::span<const std::uint8_t> body)
{
  Reader r(body);
  Interest i;
  i.name = decodeName(r.tlvValue(TLV_NAME));
  {
    Reader v(r.tlvValue(TLV_NONCE));
    i.nonce = v.u64();
  }
  if (!r.atEnd() && r.peekType() == TLV_ACCESS_RIGHTS) {
    std::span<const std::uint8_t> v = r.tlvValue(TLV_ACCESS_RIGHTS);
    i.access_rights = std::string(reinterpret_cast<const char*>(v.data()), v.size());
  }
  {
    Reader v(r.tlvValue(TLV_IFLAGS));
    std::uint8_t flags = v.u8();
    if (flags & ~0x07)
      throw DecodeError("unknown interest flag bits");
    i.offloading = flags & 0x01;
    i.adhoc_response = flags & 0x02;
    i.microservice_availability = flags & 0x04;
  }
  {
    Reader v(r.tlvValue(TLV_HOP_BUDGET));
    i.hop_budget = v.u8();
  }
  if (!r.atEnd() && r.peekType() == TLV_LAST_SYNC) {
    Reader v(r.tlvValue(TLV_LAST_SYNC));
    i.last_sync_time = v.i64();
  }
  if (!r.atEnd() && r.peekType() == TLV_ADMISSION) {
    Reader v(r.tlvValue(TLV_ADMISSION));
    AdmissionInfo a;
    a.estimated_parking_ticks = v.i64();
    a.available_resources = v.u64();
    i.admission_info = a;
  }
  if (!r.atEnd())
    throw DecodeError("trailing bytes in interest");
  return i;
}

Data decodeData(std::span<const std::uint8_t> body)
{
  Reader r(body);
  Data d;
  d.name = decodeName(r.tlvValue(TLV_NAME));
  {
    Reader v(r.tlvValue(TLV_KIND));
    std::uint8_t k = v.u8();
    if (k < 1 || k > 5)
      throw DecodeError("unknown payload kind");
    d.kind = static_cast<PayloadKind>(k);
  }
  {
    Reader v(r.tlvValue(TLV_DFLAGS));
    std::uint8_t flags = v.u8();
    if (flags & ~0x07)
      throw DecodeError("unknown data flag bits");
    d.adhoc_response = flags & 0x01;
    d.microservice_fetch = flags & 0x02;
    d.more_access_rights = flags & 0x04;
  }
  d.payload = decodePayload(d.kind, r.tlvValue(TLV_PAYLOAD));
  if (!r.atEnd())
    throw DecodeError("trailing bytes in data");
  return d;
}

} // namespace

Packet decode(std::span<const std::uint8_t> wire)
{
  Reader r(wire);
  std::uint8_t type = r.peekType();
  if (type == TLV_INTEREST) {
    Interest i = decodeInterest(r.tlvValue(TLV_INTEREST));
    if (!r.atEnd())
      throw DecodeError("trailing bytes after packet");
    return i;
  }
  if (type == TLV_DATA) {
    Data d = decodeData(r.tlvValue(TLV_DATA));
    if (!r.atEnd())
      throw DecodeError("trailing bytes after packet");
    return d;
  }
  throw DecodeError("unknown packet type");
}

std::pair<std::string, std::uint64_t> duplicateKey(const Interest& i)
{
  return {i.name.canonical(), i.nonce};
}

std::uint64_t wireSize(const Packet& p)
{
  std::uint64_t bulk = 0;
  if (const Data* d = std::get_if<Data>(&p)) {
    if (const MicroserviceCode* c = std::get_if<MicroserviceCode>(&d->payload))
      bulk = c->code_size_bytes;
    else if (const HandoverTarget* h = std::get_if<HandoverTarget>(&d->payload))
      bulk = h->state_bytes;
  }
  return encode(p).size() + bulk;
}

bool isInterest(const Packet& p)
{
  return std::holds_alternative<Interest>(p);
}

const FeName& packetName(const Packet& p)
{
  return std::visit([](const auto& v) -> const FeName& { return v.name; }, p);
}

std::string describePacket(const Packet& p)
{
  std::ostringstream os;
  if (const Interest* i = std::get_if<Interest>(&p)) {
    os << "I " << i->name.canonical() << " nonce=" << i->nonce;
    if (i->access_rights)
      os << " ar=" << i->access_rights->substr(0, 8);
    if (i->offloading)
      os << " offload";
    if (i->adhoc_response)
      os << " adhoc";
    if (i->microservice_availability)
      os << " avail";
    if (i->last_sync_time)
      os << " sync_t=" << *i->last_sync_time;
    if (i->admission_info)
      os << " adm=" << i->admission_info->estimated_parking_ticks << "/"
         << i->admission_info->available_resources;
    os << " hop=" << static_cast<int>(i->hop_budget);
  }
  else {
    const Data& d = std::get<Data>(p);
    os << "D " << d.name.canonical();
    switch (d.kind) {
      case PayloadKind::ComputedResult:
        os << " result prod=" << std::get<ComputedResult>(d.payload).producer_node;
        break;
      case PayloadKind::MicroserviceCode: {
        const MicroserviceCode& c = std::get<MicroserviceCode>(d.payload);
        os << " code " << c.microservice << " " << c.code_size_bytes << "B";
        break;
      }
      case PayloadKind::HmmBatch: {
        const HmmBatch& b = std::get<HmmBatch>(d.payload);
        os << " hmm n=" << b.records.size() << " max_t=" << b.batch_max_time;
        break;
      }
      case PayloadKind::SlotAssignment: {
        const SlotAssignment& s = std::get<SlotAssignment>(d.payload);
        os << " slot " << s.vin << (s.accepted ? " accept #" : " reject #") << s.slot;
        break;
      }
      case PayloadKind::HandoverTarget: {
        const HandoverTarget& h = std::get<HandoverTarget>(d.payload);
        os << " handover " << h.from_vin << "->" << (h.target_vin.empty() ? "cloud" : h.target_vin)
           << " rem=" << h.remaining_work;
        break;
      }
    }
    if (d.adhoc_response)
      os << " adhoc";
    if (d.microservice_fetch)
      os << " fetch";
    if (d.more_access_rights)
      os << " more";
  }
  return os.str();
}

} // namespace foggyedge
