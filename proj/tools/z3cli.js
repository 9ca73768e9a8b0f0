#!/usr/bin/env node
// Minimal SMT-LIB 2 command-line front end over the z3 WASM build.
// Usage: z3cli.js <file.smt2>   (or reads stdin when no file given)
const fs = require('fs');
const { init } = require('z3-solver');

async function main() {
  const path = process.argv[2];
  const text = path ? fs.readFileSync(path, 'utf8') : fs.readFileSync(0, 'utf8');
  const { Z3, em } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  Z3.del_config(cfg);
  try {
    const out = await Z3.eval_smtlib2_string(ctx, text);
    process.stdout.write(out.endsWith('\n') ? out : out + '\n');
  } catch (e) {
    process.stderr.write(String(e) + '\n');
    process.exitCode = 1;
  } finally {
    Z3.del_context(ctx);
    em.PThread.terminateAllThreads();
  }
  process.exit(process.exitCode || 0);
}
main();
