#include "lsysgen/codegen.hpp"

namespace lsysgen {
namespace {

constexpr const char* kCommon = R"(var (
	bgDebug          = ${debug_default_bool}
	bgCS      uint64 = 14695981039346656037
	bgNextID  uint64
	bgLive    int64
	bgOut            = bufio.NewWriterSize(os.Stdout, 1<<16)
	bgOpNames        = [...]string{"", "new", "insert", "remove", "contains"}
)

// 64-bit LCG shared with the generator.
func bgRand(state *uint64) uint64 {
	*state = *state*6364136228273018565 + 1442695040888963407
	return *state >> 33
}

func bgEvent(op uint64, v uint64, val int64, res int64) {
	e := (op << 48) | ((v & 0xFFFF) << 32) | ((uint64(val) & 0xFFFF) << 16) | (uint64(res) & 0xFFFF)
	bgCS = (bgCS * 1099511628211) ^ e
	if bgDebug {
		bgOut.WriteString("OP kind=" + bgOpNames[op] + " var=" + strconv.FormatUint(v, 10) +
			" val=" + strconv.FormatInt(val, 10) + " res=" + strconv.FormatInt(res, 10) + "\n")
	}
}
)";

// Reference counts are kept so traces match the C runtime; the collector
// does the actual freeing.
constexpr const char* kObjectCommon = R"(
type bgData struct {
	items    []*bgObj
	consumed int
}

func bgNew(d *bgData) *bgObj {
	if d.consumed < len(d.items) {
		o := d.items[d.consumed]
		d.consumed++
		bgEvent(1, o.id, 0, 0)
		return o
	}
	bgNextID++
	bgLive++
	o := &bgObj{refC: 1, id: bgNextID}
	bgEvent(1, o.id, 0, 1)
	return o
}

func bgRelease(o *bgObj) {
	o.refC--
	if o.refC == 0 {
		bgLive--
		bgClear(o)
	}
}

func bgPass(items []*bgObj) *bgData {
	for _, o := range items {
		o.refC++
	}
	return &bgData{items: items}
}

func bgDataRelease(d *bgData) {
	for d.consumed < len(d.items) {
		bgRelease(d.items[d.consumed])
		d.consumed++
	}
}
)";

constexpr const char* kArrayRuntime = R"(
type bgObj struct {
	refC  int64
	id    uint64
	items []int64
}

func bgClear(o *bgObj) { o.items = nil }

func bgInsert(o *bgObj, v int64) {
	o.items = append(o.items, v)
	bgEvent(2, o.id, v, int64(len(o.items)))
}

func bgRemove(o *bgObj, v int64) {
	for i, x := range o.items {
		if x == v {
			o.items = append(o.items[:i], o.items[i+1:]...)
			bgEvent(3, o.id, v, 1)
			return
		}
	}
	bgEvent(3, o.id, v, 0)
}

func bgContains(o *bgObj, v int64) {
	for _, x := range o.items {
		if x == v {
			bgEvent(4, o.id, v, 1)
			return
		}
	}
	bgEvent(4, o.id, v, 0)
}
)";

constexpr const char* kListRuntime = R"(
type bgNode struct {
	value int64
	next  *bgNode
}

type bgObj struct {
	refC int64
	id   uint64
	head *bgNode
	n    int64
}

func bgClear(o *bgObj) { o.head = nil }

// Sorted insert after any equal values.
func bgInsert(o *bgObj, v int64) {
	at := &o.head
	for *at != nil && (*at).value <= v {
		at = &(*at).next
	}
	*at = &bgNode{value: v, next: *at}
	o.n++
	bgEvent(2, o.id, v, o.n)
}

func bgRemove(o *bgObj, v int64) {
	at := &o.head
	for *at != nil && (*at).value < v {
		at = &(*at).next
	}
	if *at != nil && (*at).value == v {
		*at = (*at).next
		o.n--
		bgEvent(3, o.id, v, 1)
		return
	}
	bgEvent(3, o.id, v, 0)
}

func bgContains(o *bgObj, v int64) {
	n := o.head
	for n != nil && n.value < v {
		n = n.next
	}
	if n != nil && n.value == v {
		bgEvent(4, o.id, v, 1)
		return
	}
	bgEvent(4, o.id, v, 0)
}
)";

constexpr const char* kScalarRuntime = R"(
type bgData struct {
	items    []int64
	consumed int
}

func bgSNew(d *bgData, ordinal uint64) int64 {
	if d.consumed < len(d.items) {
		v := d.items[d.consumed]
		d.consumed++
		bgEvent(1, ordinal, 0, 0)
		return v
	}
	bgEvent(1, ordinal, 0, 1)
	return 0
}

func bgPass(items []int64) *bgData { return &bgData{items: items} }

func bgDataRelease(d *bgData) { d.consumed = len(d.items) }

func bgSInsert(x *int64, ordinal uint64, v int64) {
	*x++
	bgEvent(2, ordinal, v, *x)
}

func bgSRemove(x *int64, ordinal uint64, v int64) {
	*x--
	bgEvent(3, ordinal, v, *x)
}

func bgSContains(x *int64, ordinal uint64, v int64) {
	var res int64
	if *x == 0 {
		res = 1
	}
	bgEvent(4, ordinal, v, res)
}
)";

constexpr const char* kMain = R"(package main

import (
	"bufio"
	"fmt"
	"os"
	"strconv"
)

${runtime}
${functions}

func main() {
	var path uint64
	for _, arg := range os.Args[1:] {
		if arg == "--debug" {
			bgDebug = true
			continue
		}
		p, err := strconv.ParseUint(arg, 10, 64)
		if err != nil {
			fmt.Fprintln(os.Stderr, "usage:", os.Args[0], "[PATH] [--debug]")
			os.Exit(2)
		}
		path = p
	}
	${entry}(bgPass(nil), path)
	bgOut.WriteString("CHECKSUM " + strconv.FormatUint(bgCS, 10) + "\n")
	bgOut.Flush()
	if bgLive != 0 {
		fmt.Fprintln(os.Stderr, "leak:", bgLive, "live objects at exit")
		os.Exit(3)
	}
}
)";

} // namespace

BackendTemplates go_backend_templates() {
    BackendTemplates t;
    auto& e = t.entries;
    e["file.main"] = "main.go";
    e["file.unit"] = "${name}.go";
    e["runtime@array"] = std::string(kCommon) + kObjectCommon + kArrayRuntime;
    e["runtime@sortedlist"] = std::string(kCommon) + kObjectCommon + kListRuntime;
    e["runtime@scalar"] = std::string(kCommon) + kScalarRuntime;
    e["unit.main"] = kMain;
    e["unit"] = "package main\n\n${functions}";

    e["function"] = "func ${name}(data *bgData, path uint64) {\n"
                    "\t_ = path\n"
                    "\t${body}\n"
                    "\tbgDataRelease(data)\n"
                    "}\n";
    e["scope"] = "{\n\t${body}\n}\n";
    e["if"] = "${cond}\n"
              "if (path>>${bit})&1 == 1 {\n"
              "\t${then}\n"
              "}${else}\n";
    e["else"] = " else {\n\t${body}\n}\n";
    e["loop"] = "for i${depth} := 0; i${depth} < ${trip}; i${depth}++ {\n"
                "\t${cond}\n"
                "\t${body}\n"
                "}\n";
    e["call"] = "${callee}(bgPass([]*bgObj{${args}}), path)\n";
    e["call@scalar"] = "${callee}(bgPass([]int64{${args}}), path)\n";

    e["new"] = "${var} := bgNew(data)\n";
    e["insert"] = "bgInsert(${var}, ${value})\n";
    e["remove"] = "bgRemove(${var}, ${value})\n";
    e["contains"] = "bgContains(${var}, ${value})\n";
    e["release"] = "bgRelease(${var})\n";

    e["new@scalar"] = "${var} := bgSNew(data, ${ordinal})\n";
    e["insert@scalar"] = "bgSInsert(&${var}, ${ordinal}, ${value})\n";
    e["remove@scalar"] = "bgSRemove(&${var}, ${ordinal}, ${value})\n";
    e["contains@scalar"] = "bgSContains(&${var}, ${ordinal}, ${value})\n";
    e["release@scalar"] = "_ = ${var}\n";
    return t;
}

} // namespace lsysgen
