#include "depositlag/oai.h"

#include <expat.h>

#include <memory>
#include <set>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

std::string_view local_name(const XML_Char* name) {
  std::string_view n(name);
  const auto colon = n.rfind(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Element nesting we care about: OAI-PMH > ListRecords > record > header|metadata > ...
struct ParseState {
  OaiPage page;
  std::vector<std::string> stack;
  std::string text;

  bool in_record = false;
  bool in_header = false;
  bool in_metadata = false;
  std::size_t metadata_depth = 0;
  std::string identifier;
  std::string datestamp;
  std::map<std::string, std::vector<std::string>> metadata;
  std::set<std::string> seen_identifiers;

  bool saw_token_element = false;
  std::string token;
  bool in_error = false;

  void finish_record() {
    const std::string id = trimmed(identifier);
    const std::string stamp = trimmed(datestamp);
    if (id.empty()) {
      page.record_errors.push_back({"", "record header has no identifier"});
    } else if (stamp.empty()) {
      page.record_errors.push_back({id, "record header has no datestamp"});
    } else if (!seen_identifiers.insert(id).second) {
      page.record_errors.push_back({id, "duplicate identifier within page"});
    } else {
      try {
        page.records.push_back(OaiRecord{id, CalendarDate::parse_iso(stamp), std::move(metadata)});
      } catch (const DataError& e) {
        page.record_errors.push_back({id, e.what()});
      }
    }
    identifier.clear();
    datestamp.clear();
    metadata.clear();
  }
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<ParseState*>(user);
  const std::string_view local = local_name(name);
  st.text.clear();
  st.stack.emplace_back(local);

  if (local == "record" && !st.in_metadata) {
    st.in_record = true;
  } else if (st.in_record && local == "header" && !st.in_metadata) {
    st.in_header = true;
  } else if (st.in_record && local == "metadata" && !st.in_metadata) {
    st.in_metadata = true;
    st.metadata_depth = st.stack.size();
  } else if (local == "resumptionToken") {
    st.saw_token_element = true;
  } else if (local == "error" && st.stack.size() == 2) {
    st.in_error = true;
    for (const XML_Char** a = attrs; a && *a; a += 2) {
      if (std::string_view(a[0]) == "code") {
        const std::string code(a[1]);
        if (code != "noRecordsMatch") st.page.error_code = code;
      }
    }
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<ParseState*>(user);
  const std::string_view local = local_name(name);

  if (st.in_header) {
    if (local == "identifier") {
      st.identifier = st.text;
    } else if (local == "datestamp") {
      st.datestamp = st.text;
    } else if (local == "header") {
      st.in_header = false;
    }
  } else if (st.in_metadata) {
    // Dublin Core fields sit two levels below <metadata> (inside <oai_dc:dc>).
    if (st.stack.size() == st.metadata_depth + 2) {
      const std::string value = trimmed(st.text);
      if (!value.empty()) st.metadata[std::string(local)].push_back(value);
    } else if (st.stack.size() == st.metadata_depth) {
      st.in_metadata = false;
    }
  } else if (st.in_record && local == "record") {
    st.in_record = false;
    st.finish_record();
  } else if (local == "resumptionToken") {
    st.token = trimmed(st.text);
  } else if (st.in_error && local == "error") {
    st.in_error = false;
    if (st.page.error_code) st.page.error_message = trimmed(st.text);
  }
  st.stack.pop_back();
  st.text.clear();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  static_cast<ParseState*>(user)->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

OaiPage parse_oai_response(std::string_view xml) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                      &XML_ParserFree);
  if (!parser) throw std::bad_alloc();
  ParseState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    const auto offset = XML_GetCurrentByteIndex(parser.get());
    throw XmlParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                        static_cast<std::size_t>(offset < 0 ? 0 : offset));
  }
  if (state.saw_token_element && !state.token.empty()) state.page.resumption_token = state.token;
  return std::move(state.page);
}

}  // namespace depositlag
