#pragma once

// Bundled English rule pack. The marker inventory is a curated
// approximation of common English politeness modifiers; `atdlab rulepack
// export` writes it out verbatim (after canonical re-serialization).

namespace atdlab {

inline constexpr const char* kDefaultPackJson = R"json({
  "version": "1.0.0",
  "language": "en",
  "apology_prefix": "I'm sorry, but ",
  "markers": [
    {"id": "bald.now", "category": "urgency", "strategy": "bald_on_record", "pattern": "now", "weight": 1},
    {"id": "bald.right-now", "category": "urgency", "strategy": "bald_on_record", "pattern": "right now", "weight": 1},
    {"id": "bald.asap", "category": "urgency", "strategy": "bald_on_record", "pattern": "asap", "weight": 1},
    {"id": "bald.immediately", "category": "urgency", "strategy": "bald_on_record", "pattern": "immediately", "weight": 1},
    {"id": "bald.today", "category": "urgency", "strategy": "bald_on_record", "pattern": "today", "weight": 1},
    {"id": "bald.at-once", "category": "urgency", "strategy": "bald_on_record", "pattern": "at once", "weight": 1},
    {"id": "bald.urgently", "category": "urgency", "strategy": "bald_on_record", "pattern": "urgently", "weight": 1},
    {"id": "bald.no-excuses", "category": "urgency", "strategy": "bald_on_record", "pattern": "no excuses", "weight": 1},

    {"id": "pos.hey", "category": "address", "strategy": "positive", "pattern": "hey", "weight": 0.5},
    {"id": "pos.buddy", "category": "address", "strategy": "positive", "pattern": "buddy", "weight": 1},
    {"id": "pos.pal", "category": "address", "strategy": "positive", "pattern": "pal", "weight": 1},
    {"id": "pos.lets", "category": "solidarity", "strategy": "positive", "pattern": "let's", "weight": 1},
    {"id": "pos.let-us", "category": "solidarity", "strategy": "positive", "pattern": "let us", "weight": 1},
    {"id": "pos.together", "category": "solidarity", "strategy": "positive", "pattern": "together", "weight": 0.5},
    {"id": "pos.in-this-together", "category": "solidarity", "strategy": "positive", "pattern": "we're in this together", "weight": 1.5},
    {"id": "pos.youre-the-best", "category": "solidarity", "strategy": "positive", "pattern": "you're the best", "weight": 1},
    {"id": "pos.thanks-a-ton", "category": "solidarity", "strategy": "positive", "pattern": "thanks a ton", "weight": 1},
    {"id": "pos.as-always", "category": "solidarity", "strategy": "positive", "pattern": "as always", "weight": 0.5},
    {"id": "pos.great-job", "category": "solidarity", "strategy": "positive", "pattern": "great job", "weight": 1},
    {"id": "pos.our-team", "category": "solidarity", "strategy": "positive", "pattern": "our team", "weight": 0.5},

    {"id": "neg.know-busy", "category": "deference", "strategy": "negative", "pattern": "i know you are busy", "weight": 1},
    {"id": "neg.know-busy-contracted", "category": "deference", "strategy": "negative", "pattern": "i know you're busy", "weight": 1},
    {"id": "neg.sorry-to-bother", "category": "deference", "strategy": "negative", "pattern": "sorry to bother you", "weight": 1},
    {"id": "neg.im-sorry-to-bother", "category": "deference", "strategy": "negative", "pattern": "i'm sorry to bother you", "weight": 1},
    {"id": "neg.apologize-for", "category": "deference", "strategy": "negative", "pattern": "i apologize for", "weight": 1},
    {"id": "neg.dear", "category": "deference", "strategy": "negative", "pattern": "dear *", "weight": 0.5},
    {"id": "neg.with-respect", "category": "deference", "strategy": "negative", "pattern": "with respect", "weight": 0.5},
    {"id": "neg.would-you-be-willing", "category": "hedge", "strategy": "negative", "pattern": "would you be willing", "weight": 1},
    {"id": "neg.could-you-possibly", "category": "hedge", "strategy": "negative", "pattern": "could you possibly", "weight": 1},
    {"id": "neg.would-you-mind", "category": "hedge", "strategy": "negative", "pattern": "would you mind", "weight": 1},
    {"id": "neg.not-too-much-trouble", "category": "hedge", "strategy": "negative", "pattern": "if it's not too much trouble", "weight": 1},
    {"id": "neg.if-you-dont-mind", "category": "hedge", "strategy": "negative", "pattern": "if you don't mind", "weight": 1},
    {"id": "neg.if-possible", "category": "hedge", "strategy": "negative", "pattern": "if possible", "weight": 0.5},
    {"id": "neg.when-you-get-a-chance", "category": "hedge", "strategy": "negative", "pattern": "when you get a chance", "weight": 0.5},

    {"id": "off.more-likely-to", "category": "hint", "strategy": "off_record", "pattern": "more likely to", "weight": 1},
    {"id": "off.tend-to-go-better", "category": "hint", "strategy": "off_record", "pattern": "tend to go better when", "weight": 1},
    {"id": "off.things-tend-to-go-better", "category": "hint", "strategy": "off_record", "pattern": "things tend to go better when", "weight": 1},
    {"id": "off.would-be-great-if", "category": "hint", "strategy": "off_record", "pattern": "it would be great if", "weight": 1},
    {"id": "off.would-be-nice-if", "category": "hint", "strategy": "off_record", "pattern": "it would be nice if", "weight": 1},
    {"id": "off.wonder-if", "category": "hint", "strategy": "off_record", "pattern": "i wonder if", "weight": 1},
    {"id": "off.might-help-if", "category": "hint", "strategy": "off_record", "pattern": "it might help if", "weight": 1},
    {"id": "off.some-people", "category": "hint", "strategy": "off_record", "pattern": "some people", "weight": 0.5},
    {"id": "off.one-might", "category": "hint", "strategy": "off_record", "pattern": "one might", "weight": 0.5},

    {"id": "core.need", "category": "request-core", "strategy": "bald_on_record", "pattern": "need", "weight": 1},
    {"id": "core.needs", "category": "request-core", "strategy": "bald_on_record", "pattern": "needs", "weight": 1},
    {"id": "core.require", "category": "request-core", "strategy": "bald_on_record", "pattern": "require", "weight": 1},
    {"id": "core.requires", "category": "request-core", "strategy": "bald_on_record", "pattern": "requires", "weight": 1},
    {"id": "core.want", "category": "request-core", "strategy": "bald_on_record", "pattern": "want", "weight": 1},
    {"id": "core.send", "category": "request-core", "strategy": "bald_on_record", "pattern": "send", "weight": 1},
    {"id": "core.submit", "category": "request-core", "strategy": "bald_on_record", "pattern": "submit", "weight": 1},
    {"id": "core.review", "category": "request-core", "strategy": "bald_on_record", "pattern": "review", "weight": 1},
    {"id": "core.share", "category": "request-core", "strategy": "bald_on_record", "pattern": "share", "weight": 1},
    {"id": "core.approve", "category": "request-core", "strategy": "bald_on_record", "pattern": "approve", "weight": 1},
    {"id": "core.sign", "category": "request-core", "strategy": "bald_on_record", "pattern": "sign", "weight": 1},
    {"id": "core.update", "category": "request-core", "strategy": "bald_on_record", "pattern": "update", "weight": 1},
    {"id": "core.prepare", "category": "request-core", "strategy": "bald_on_record", "pattern": "prepare", "weight": 1},
    {"id": "core.provide", "category": "request-core", "strategy": "bald_on_record", "pattern": "provide", "weight": 1},
    {"id": "core.deliver", "category": "request-core", "strategy": "bald_on_record", "pattern": "deliver", "weight": 1},
    {"id": "core.finish", "category": "request-core", "strategy": "bald_on_record", "pattern": "finish", "weight": 1},
    {"id": "core.fix", "category": "request-core", "strategy": "bald_on_record", "pattern": "fix", "weight": 1},
    {"id": "core.schedule", "category": "request-core", "strategy": "bald_on_record", "pattern": "schedule", "weight": 1},
    {"id": "core.book", "category": "request-core", "strategy": "bald_on_record", "pattern": "book", "weight": 1},
    {"id": "core.check", "category": "request-core", "strategy": "bald_on_record", "pattern": "check", "weight": 1}
  ],
  "templates": [
    {"strategy": "bald_on_record", "body": "[{name}, ]{head}, now![ The deadline is {deadline}.]",
     "required_slots": ["head"], "optional_slots": ["name", "deadline"]},
    {"strategy": "bald_on_record", "body": "{head} immediately.[ Deadline: {deadline}.]",
     "required_slots": ["head"], "optional_slots": ["deadline"]},
    {"strategy": "positive", "body": "[{name}, ]{head}. Let's finalize it together[ by {deadline}]?",
     "required_slots": ["head"], "optional_slots": ["name", "deadline"]},
    {"strategy": "positive", "body": "Hey[ {name}], {head}. You're the best!",
     "required_slots": ["head"], "optional_slots": ["name"]},
    {"strategy": "negative", "body": "[{name}, ]I know you are busy, but would you be willing to help with this? {head}[ - the deadline is {deadline}].",
     "required_slots": ["head"], "optional_slots": ["name", "deadline"]},
    {"strategy": "negative", "body": "[Dear {name}, ]sorry to bother you, but could you possibly look into this? {head}.",
     "required_slots": ["head"], "optional_slots": ["name"]},
    {"strategy": "off_record", "body": "[{name}, ]things tend to go better when {head}.[ It would be great if it were settled by {deadline}.]",
     "required_slots": ["head"], "optional_slots": ["name", "deadline"]},
    {"strategy": "off_record", "body": "It would be great if someone could look at this: {head}.",
     "required_slots": ["head"], "optional_slots": []}
  ],
  "request_core_verbs": ["need", "needs", "require", "requires", "want", "send", "submit", "review", "share",
                         "approve", "sign", "update", "prepare", "provide", "deliver", "finish", "fix",
                         "schedule", "book", "check"]
})json";

}  // namespace atdlab
