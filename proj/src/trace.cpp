#include "foggyedge/trace.hpp"

#include <fstream>
#include <sstream>

namespace foggyedge {

namespace {

constexpr char MAGIC[4] = {'F', 'E', 'T', 'R'};
constexpr std::uint8_t VERSION = 1;

void putU32(std::vector<std::uint8_t>& buf, std::uint32_t v)
{
  for (int s = 24; s >= 0; s -= 8)
    buf.push_back(static_cast<std::uint8_t>(v >> s));
}

void putU64(std::vector<std::uint8_t>& buf, std::uint64_t v)
{
  for (int s = 56; s >= 0; s -= 8)
    buf.push_back(static_cast<std::uint8_t>(v >> s));
}

class Cursor {
public:
  explicit Cursor(std::span<const std::uint8_t> s)
    : m_data(s) {}

  bool atEnd() const { return m_pos == m_data.size(); }

  std::uint8_t u8()
  {
    need(1);
    return m_data[m_pos++];
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

  std::vector<std::uint8_t> bytes(std::size_t n)
  {
    need(n);
    std::vector<std::uint8_t> out(m_data.begin() + m_pos, m_data.begin() + m_pos + n);
    m_pos += n;
    return out;
  }

private:
  void need(std::size_t n) const
  {
    if (m_data.size() - m_pos < n)
      throw DecodeError("truncated trace");
  }

  std::span<const std::uint8_t> m_data;
  std::size_t m_pos = 0;
};

} // namespace

void TraceWriter::record(const TraceRecord& r)
{
  if (m_buf.empty()) {
    m_buf.insert(m_buf.end(), MAGIC, MAGIC + 4);
    m_buf.push_back(VERSION);
  }
  std::vector<std::uint8_t> body;
  putU64(body, static_cast<std::uint64_t>(r.time));
  putU32(body, r.node);
  putU32(body, r.face);
  putU32(body, r.link_dst);
  body.push_back(r.aux);
  putU32(body, static_cast<std::uint32_t>(r.packet.size()));
  body.insert(body.end(), r.packet.begin(), r.packet.end());
  putU32(body, static_cast<std::uint32_t>(r.note.size()));
  body.insert(body.end(), r.note.begin(), r.note.end());

  m_buf.push_back(static_cast<std::uint8_t>(r.kind));
  putU32(m_buf, static_cast<std::uint32_t>(body.size()));
  m_buf.insert(m_buf.end(), body.begin(), body.end());
  ++m_count;
}

void TraceWriter::writeFile(const std::string& path) const
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw std::runtime_error("cannot open trace file for writing: " + path);
  f.write(reinterpret_cast<const char*>(m_buf.data()),
          static_cast<std::streamsize>(m_buf.size()));
  if (!f)
    throw std::runtime_error("trace write failed: " + path);
}

std::vector<TraceRecord> readTrace(std::span<const std::uint8_t> bytes)
{
  std::vector<TraceRecord> out;
  if (bytes.empty())
    return out;
  Cursor c(bytes);
  for (char m : MAGIC)
    if (c.u8() != static_cast<std::uint8_t>(m))
      throw DecodeError("bad trace magic");
  if (c.u8() != VERSION)
    throw DecodeError("unsupported trace version");

  while (!c.atEnd()) {
    std::uint8_t kind = c.u8();
    if (kind < 1 || kind > 4)
      throw DecodeError("unknown trace record kind");
    std::uint32_t len = c.u32();
    Cursor body(std::span<const std::uint8_t>{});
    std::vector<std::uint8_t> raw = c.bytes(len);
    Cursor b(raw);
    TraceRecord r;
    r.kind = static_cast<TraceKind>(kind);
    r.time = static_cast<Tick>(b.u64());
    r.node = b.u32();
    r.face = b.u32();
    r.link_dst = b.u32();
    r.aux = b.u8();
    std::uint32_t plen = b.u32();
    r.packet = b.bytes(plen);
    std::uint32_t nlen = b.u32();
    std::vector<std::uint8_t> note = b.bytes(nlen);
    r.note.assign(note.begin(), note.end());
    if (!b.atEnd())
      throw DecodeError("trailing bytes in trace record");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TraceRecord> readTraceFile(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open trace file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return readTrace(bytes);
}

std::string describeRecord(const TraceRecord& r)
{
  std::ostringstream os;
  os << r.time << " n" << r.node;
  switch (r.kind) {
    case TraceKind::Send:
      os << " send f" << r.face;
      if (r.link_dst != NO_LINK_DST)
        os << "->n" << r.link_dst;
      break;
    case TraceKind::Recv:
      os << " recv f" << r.face;
      break;
    case TraceKind::Drop:
      os << " drop f" << r.face << " reason=" << static_cast<int>(r.aux);
      break;
    case TraceKind::Decision:
      os << " decision case" << static_cast<int>(r.aux) << " " << r.note << " f" << r.face;
      return os.str();
  }
  if (!r.packet.empty()) {
    try {
      os << " " << describePacket(decode(r.packet));
    }
    catch (const DecodeError&) {
      os << " <undecodable " << r.packet.size() << "B>";
    }
  }
  return os.str();
}

std::optional<std::size_t> firstDivergence(const std::vector<TraceRecord>& a,
                                           const std::vector<TraceRecord>& b)
{
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i]))
      return i;
  if (a.size() != b.size())
    return n;
  return std::nullopt;
}

} // namespace foggyedge
