/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_trajectory_free: (a: number, b: number) => void;
export const compare_scenarios: (a: number, b: bigint, c: number) => [number, number, number, number];
export const deviation_density: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
export const scenario_names: () => [number, number];
export const simulate: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number) => [number, number, number];
export const trajectory_aggregate_output: (a: number) => number;
export const trajectory_cooperation: (a: number) => [number, number];
export const trajectory_csv: (a: number) => [number, number];
export const trajectory_labor_cost: (a: number) => number;
export const trajectory_norm_cooperation: (a: number) => [number, number];
export const trajectory_norm_shirking: (a: number) => [number, number];
export const trajectory_pct_ogo: (a: number) => [number, number];
export const trajectory_production: (a: number) => [number, number];
export const trajectory_shirking: (a: number) => [number, number];
export const trajectory_steps: (a: number) => number;
export const trajectory_type_output: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
