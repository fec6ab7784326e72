/* tslint:disable */
/* eslint-disable */

/**
 * Replicate-averaged series of one scenario.
 */
export class Trajectory {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    aggregate_output(): number;
    cooperation(): Float64Array;
    csv(): string;
    labor_cost(): number;
    norm_cooperation(): Float64Array;
    norm_shirking(): Float64Array;
    pct_ogo(): Float64Array;
    production(): Float64Array;
    shirking(): Float64Array;
    steps(): number;
    /**
     * Mean output of one type: 0 = C, 1 = O, 2 = SE, 3 = ST.
     */
    type_output(type_index: number): Float64Array;
}

export function compare_scenarios(replicates: number, seed: bigint, steps: number): Float64Array;

export function deviation_density(value_type: string, stance: string, scheme: string, activity: string, norm: number, points: number): Float64Array;

export function scenario_names(): string[];

export function simulate(scenario: string, environment: string, replicates: number, seed: bigint, steps: number): Trajectory;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_trajectory_free: (a: number, b: number) => void;
    readonly compare_scenarios: (a: number, b: bigint, c: number) => [number, number, number, number];
    readonly deviation_density: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly scenario_names: () => [number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number) => [number, number, number];
    readonly trajectory_aggregate_output: (a: number) => number;
    readonly trajectory_cooperation: (a: number) => [number, number];
    readonly trajectory_csv: (a: number) => [number, number];
    readonly trajectory_labor_cost: (a: number) => number;
    readonly trajectory_norm_cooperation: (a: number) => [number, number];
    readonly trajectory_norm_shirking: (a: number) => [number, number];
    readonly trajectory_pct_ogo: (a: number) => [number, number];
    readonly trajectory_production: (a: number) => [number, number];
    readonly trajectory_shirking: (a: number) => [number, number];
    readonly trajectory_steps: (a: number) => number;
    readonly trajectory_type_output: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
