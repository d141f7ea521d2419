#!/usr/bin/env node
// SMT-LIB v2 solver process backed by the Z3 WebAssembly build.
//
// Reads commands from stdin, evaluates each complete s-expression against a
// persistent Z3 context, and writes the solver's reply to stdout. Behaves
// like `z3 -in` as far as the driving process can tell, including
// :print-success handshaking, which the string evaluator does not implement
// itself.
//
// Evaluation goes through the synchronous Z3_eval_smtlib2_string export.
// The package's async wrapper hands the command string to a worker thread
// after ccall has already released it, which intermittently corrupts the
// solver's parser stream under load; the synchronous call avoids that
// entirely. Query timeouts still work: z3's timer runs on its own thread.

'use strict';

const { init } = require('z3-solver');

// Splits a byte stream into complete top-level s-expressions. Tracks string
// literals, |quoted symbols| and ; comments so parentheses inside them do
// not count.
class CommandScanner {
  constructor() {
    this.buf = '';
    this.depth = 0;
    this.inString = false;
    this.inQuoted = false;
    this.inComment = false;
    this.start = 0;
    this.pos = 0;
  }

  push(chunk) {
    this.buf += chunk;
    const out = [];
    while (this.pos < this.buf.length) {
      const c = this.buf[this.pos];
      if (this.inComment) {
        if (c === '\n') this.inComment = false;
      } else if (this.inString) {
        if (c === '"') this.inString = false;
      } else if (this.inQuoted) {
        if (c === '|') this.inQuoted = false;
      } else if (c === ';') {
        this.inComment = true;
      } else if (c === '"') {
        this.inString = true;
      } else if (c === '|') {
        this.inQuoted = true;
      } else if (c === '(') {
        if (this.depth === 0) this.start = this.pos;
        this.depth++;
      } else if (c === ')') {
        this.depth--;
        if (this.depth === 0) {
          out.push(this.buf.slice(this.start, this.pos + 1));
        }
      }
      this.pos++;
    }
    if (this.depth === 0) {
      this.buf = '';
      this.pos = 0;
    }
    return out;
  }
}

async function main() {
  const { Z3, em } = await init();
  const cfg = Z3.mk_config();
  Z3.set_param_value(cfg, 'model', 'true');
  const ctx = Z3.mk_context(cfg);

  let printSuccess = false;
  const write = (s) => process.stdout.write(s);

  const evalSync = (cmd) =>
    em.ccall('Z3_eval_smtlib2_string', 'string', ['number', 'string'], [ctx, cmd]);

  // Options the wasm evaluator rejects after context creation but that a
  // conforming solver must accept; acknowledge without forwarding.
  const swallowedOptions = /^\(\s*set-option\s+:(global-declarations|interactive-mode|print-success)\b/;

  function evalCommand(cmd) {
    const trimmed = cmd.replace(/\s+/g, ' ').trim();
    if (trimmed === '(exit)') {
      process.exit(0);
    }
    const m = trimmed.match(swallowedOptions);
    if (m) {
      if (m[1] === 'print-success') {
        printSuccess = /true\s*\)$/.test(trimmed);
        if (printSuccess) write('success\n');
        return;
      }
      if (printSuccess) write('success\n');
      return;
    }
    let result;
    try {
      result = evalSync(cmd);
    } catch (err) {
      result = `(error "${String(err && err.message ? err.message : err).replace(/"/g, "'")}")\n`;
    }
    if (trimmed === '(reset)') {
      printSuccess = false;
      write(result);
      return;
    }
    if (result.length === 0) {
      if (printSuccess) write('success\n');
    } else {
      write(result);
      if (printSuccess && !result.endsWith('\n')) write('\n');
    }
  }

  const scanner = new CommandScanner();
  process.stdin.setEncoding('utf8');
  process.stdin.on('data', (chunk) => {
    for (const cmd of scanner.push(chunk)) evalCommand(cmd);
  });
  process.stdin.on('end', () => {
    process.exit(0);
  });
}

main().catch((err) => {
  process.stderr.write(`smt2_server: ${err}\n`);
  process.exit(1);
});
