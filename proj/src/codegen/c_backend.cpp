#include "lsysgen/codegen.hpp"

namespace lsysgen {
namespace {

// Shared by all three C runtimes: globals, PRNG, checksum and trace output.
constexpr const char* kCommon = R"(#include <inttypes.h>
#include <stddef.h>
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

extern int bg_debug;
extern uint64_t bg_cs;
extern uint64_t bg_next_id;
extern int64_t bg_live;

/* 64-bit LCG shared with the generator. */
static inline uint64_t bg_rand(uint64_t *state) {
    *state = *state * 6364136228273018565ULL + 1442695040888963407ULL;
    return *state >> 33;
}

static inline void bg_event(unsigned op, uint64_t var, int64_t val, int64_t res) {
    static const char *const names[] = {"", "new", "insert", "remove", "contains"};
    uint64_t e = ((uint64_t)op << 48) | ((var & 0xFFFFu) << 32) |
                 (((uint64_t)val & 0xFFFFu) << 16) | ((uint64_t)res & 0xFFFFu);
    bg_cs = (bg_cs * 1099511628211ULL) ^ e;
    if (bg_debug) {
        printf("OP kind=%s var=%" PRIu64 " val=%" PRId64 " res=%" PRId64 "\n", names[op], var, val, res);
    }
}
)";

constexpr const char* kObjectCommon = R"(
/* Data parameter: references passed by the caller, each consumed once. */
typedef struct BgData {
    struct BgObj **items;
    size_t len;
    size_t consumed;
} BgData;

static inline void bg_free(BgObj *o);

static inline BgObj *bg_alloc(void) {
    BgObj *o = (BgObj *)calloc(1, sizeof *o);
    if (o == NULL) {
        abort();
    }
    o->refC = 1;
    o->id = ++bg_next_id;
    ++bg_live;
    return o;
}

static inline BgObj *bg_new(BgData *d) {
    BgObj *o;
    if (d->consumed < d->len) {
        o = d->items[d->consumed++];
        bg_event(1, o->id, 0, 0);
        return o;
    }
    o = bg_alloc();
    bg_event(1, o->id, 0, 1);
    return o;
}

static inline void bg_release(BgObj *o) {
    if (--o->refC == 0) {
        bg_free(o);
        --bg_live;
    }
}

static inline BgData bg_pass(BgObj **items, size_t n) {
    BgData d;
    size_t i;
    for (i = 0; i < n; ++i) {
        ++items[i]->refC;
    }
    d.items = items;
    d.len = n;
    d.consumed = 0;
    return d;
}

static inline void bg_data_release(BgData *d) {
    while (d->consumed < d->len) {
        bg_release(d->items[d->consumed++]);
    }
}
)";

constexpr const char* kArrayRuntime = R"(
typedef struct BgObj {
    int64_t refC;
    uint64_t id;
    int64_t *items;
    size_t len;
    size_t cap;
} BgObj;
)";

constexpr const char* kArrayOps = R"(
static inline void bg_free(BgObj *o) {
    free(o->items);
    free(o);
}

static inline void bg_insert(BgObj *o, int64_t v) {
    if (o->len == o->cap) {
        size_t cap = o->cap == 0 ? 4 : o->cap * 2;
        int64_t *items = (int64_t *)realloc(o->items, cap * sizeof *items);
        if (items == NULL) {
            abort();
        }
        o->items = items;
        o->cap = cap;
    }
    o->items[o->len++] = v;
    bg_event(2, o->id, v, (int64_t)o->len);
}

static inline void bg_remove(BgObj *o, int64_t v) {
    size_t i;
    for (i = 0; i < o->len; ++i) {
        if (o->items[i] == v) {
            memmove(o->items + i, o->items + i + 1, (o->len - i - 1) * sizeof *o->items);
            --o->len;
            bg_event(3, o->id, v, 1);
            return;
        }
    }
    bg_event(3, o->id, v, 0);
}

static inline void bg_contains(BgObj *o, int64_t v) {
    size_t i;
    for (i = 0; i < o->len; ++i) {
        if (o->items[i] == v) {
            bg_event(4, o->id, v, 1);
            return;
        }
    }
    bg_event(4, o->id, v, 0);
}
)";

constexpr const char* kListRuntime = R"(
typedef struct BgNode {
    int64_t value;
    struct BgNode *next;
} BgNode;

typedef struct BgObj {
    int64_t refC;
    uint64_t id;
    BgNode *head;
    size_t len;
} BgObj;
)";

constexpr const char* kListOps = R"(
static inline void bg_free(BgObj *o) {
    BgNode *n = o->head;
    while (n != NULL) {
        BgNode *next = n->next;
        free(n);
        n = next;
    }
    free(o);
}

/* Sorted insert after any equal values. */
static inline void bg_insert(BgObj *o, int64_t v) {
    BgNode **at = &o->head;
    BgNode *n = (BgNode *)malloc(sizeof *n);
    if (n == NULL) {
        abort();
    }
    while (*at != NULL && (*at)->value <= v) {
        at = &(*at)->next;
    }
    n->value = v;
    n->next = *at;
    *at = n;
    ++o->len;
    bg_event(2, o->id, v, (int64_t)o->len);
}

static inline void bg_remove(BgObj *o, int64_t v) {
    BgNode **at = &o->head;
    while (*at != NULL && (*at)->value < v) {
        at = &(*at)->next;
    }
    if (*at != NULL && (*at)->value == v) {
        BgNode *dead = *at;
        *at = dead->next;
        free(dead);
        --o->len;
        bg_event(3, o->id, v, 1);
        return;
    }
    bg_event(3, o->id, v, 0);
}

static inline void bg_contains(BgObj *o, int64_t v) {
    BgNode *n = o->head;
    while (n != NULL && n->value < v) {
        n = n->next;
    }
    bg_event(4, o->id, v, n != NULL && n->value == v ? 1 : 0);
}
)";

constexpr const char* kScalarRuntime = R"(
typedef struct BgData {
    int64_t *items;
    size_t len;
    size_t consumed;
} BgData;

static inline int64_t bg_snew(BgData *d, uint64_t ordinal) {
    if (d->consumed < d->len) {
        bg_event(1, ordinal, 0, 0);
        return d->items[d->consumed++];
    }
    bg_event(1, ordinal, 0, 1);
    return 0;
}

static inline BgData bg_pass(int64_t *items, size_t n) {
    BgData d;
    d.items = items;
    d.len = n;
    d.consumed = 0;
    return d;
}

static inline void bg_data_release(BgData *d) {
    d->consumed = d->len;
}

static inline void bg_sinsert(int64_t *x, uint64_t ordinal, int64_t v) {
    ++*x;
    bg_event(2, ordinal, v, *x);
}

static inline void bg_sremove(int64_t *x, uint64_t ordinal, int64_t v) {
    --*x;
    bg_event(3, ordinal, v, *x);
}

static inline void bg_scontains(const int64_t *x, uint64_t ordinal, int64_t v) {
    bg_event(4, ordinal, v, *x == 0 ? 1 : 0);
}
)";

constexpr const char* kMain = R"(#include "bg_runtime.h"

int bg_debug = ${debug_default};
uint64_t bg_cs = 14695981039346656037ULL;
uint64_t bg_next_id = 0;
int64_t bg_live = 0;

${functions}

int main(int argc, char **argv) {
    uint64_t path = 0;
    int i;
    BgData data;
    for (i = 1; i < argc; ++i) {
        if (strcmp(argv[i], "--debug") == 0) {
            bg_debug = 1;
        } else {
            char *end = NULL;
            path = (uint64_t)strtoull(argv[i], &end, 10);
            if (end == argv[i] || *end != '\0') {
                fprintf(stderr, "usage: %s [PATH] [--debug]\n", argv[0]);
                return 2;
            }
        }
    }
    data = bg_pass(NULL, 0);
    ${entry}(&data, path);
    printf("CHECKSUM %" PRIu64 "\n", bg_cs);
    if (bg_live != 0) {
        fprintf(stderr, "leak: %" PRId64 " live objects at exit\n", bg_live);
        return 3;
    }
    return 0;
}
)";

} // namespace

BackendTemplates c_backend_templates() {
    BackendTemplates t;
    auto& e = t.entries;
    e["file.header"] = "bg_runtime.h";
    e["file.main"] = "main.c";
    e["file.unit"] = "${name}.c";
    e["header"] = "#ifndef BG_RUNTIME_H\n#define BG_RUNTIME_H\n\n${runtime}\n${prototypes}\n#endif\n";
    e["runtime@array"] = std::string(kCommon) + kArrayRuntime + kObjectCommon + kArrayOps;
    e["runtime@sortedlist"] = std::string(kCommon) + kListRuntime + kObjectCommon + kListOps;
    e["runtime@scalar"] = std::string(kCommon) + kScalarRuntime;
    e["prototype"] = "void ${name}(BgData *data, uint64_t path);\n";
    e["unit.main"] = kMain;
    e["unit"] = "#include \"bg_runtime.h\"\n\n${functions}";

    e["function"] = "void ${name}(BgData *data, uint64_t path) {\n"
                    "    (void)path;\n"
                    "    ${body}\n"
                    "    bg_data_release(data);\n"
                    "}\n";
    e["scope"] = "{\n    ${body}\n}\n";
    e["if"] = "${cond}\n"
              "if ((path >> ${bit}) & 1u) {\n"
              "    ${then}\n"
              "}${else}\n";
    e["else"] = " else {\n    ${body}\n}\n";
    e["loop"] = "for (int i${depth} = 0; i${depth} < ${trip}; ++i${depth}) {\n"
                "    ${cond}\n"
                "    ${body}\n"
                "}\n";
    e["call"] = "{\n"
                "    BgObj *bg_args[${argcap}] = {${args_init}};\n"
                "    BgData bg_d = bg_pass(bg_args, ${argc});\n"
                "    ${callee}(&bg_d, path);\n"
                "}\n";
    e["call@scalar"] = "{\n"
                       "    int64_t bg_args[${argcap}] = {${args_init}};\n"
                       "    BgData bg_d = bg_pass(bg_args, ${argc});\n"
                       "    ${callee}(&bg_d, path);\n"
                       "}\n";

    e["new"] = "BgObj *${var} = bg_new(data);\n";
    e["insert"] = "bg_insert(${var}, ${value});\n";
    e["remove"] = "bg_remove(${var}, ${value});\n";
    e["contains"] = "bg_contains(${var}, ${value});\n";
    e["release"] = "bg_release(${var});\n";

    e["new@scalar"] = "int64_t ${var} = bg_snew(data, ${ordinal});\n";
    e["insert@scalar"] = "bg_sinsert(&${var}, ${ordinal}, ${value});\n";
    e["remove@scalar"] = "bg_sremove(&${var}, ${ordinal}, ${value});\n";
    e["contains@scalar"] = "bg_scontains(&${var}, ${ordinal}, ${value});\n";
    e["release@scalar"] = "(void)${var};\n";
    return t;
}

} // namespace lsysgen
