"""Fixed formula collections used by the self test and the test suite."""

LOCAL_CORPUS = (
    "1!2",
    "~2?1",
    "tt",
    "P2",
    "<proc>tt",
    "<proc->tt",
    "<msg>tt",
    "<msg->tt",
    "<id>1!2",
    "<proc*;msg;proc*;msg>P1",
    "<proc*;msg;proc*;msg>P2",
    "<proc;proc>tt",
    "<proc+msg>2?1",
    "<{1!2}>tt",
    "<proc;proc->^w",
    "<proc>^w",
    "<id>^w",
    "~<msg>tt",
    "~~1!2",
    "<(msg+msg-)*>(1?2 & <proc->1!2)",
    "<(proc;{~1?2})*>~<proc>tt",
    "1!2 | <msg-;proc>2!1",
    "<(id;id)*;{~tt}>tt",
    "<(proc-+msg-)*;{~<proc->tt}>P1",
    "~<msg;msg->^w & <proc*>2?1",
)

GLOBAL_CORPUS = (
    "E 1!2",
    "E (1!2 & ~1!2)",
    "A <proc*;msg;proc*;msg>P1",
    "A (<msg>tt | <msg->tt)",
    "E ~<proc>tt",
    "E <proc->2?1",
    "E <msg>tt & A ~<proc;proc>tt",
    "E 2!1 | A 1!2",
    "A (P1 | <msg->tt)",
)
