/* tslint:disable */
/* eslint-disable */

export class DensityView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    photon(): Float64Array;
    spinWave(): Float64Array;
    readonly extent: Float64Array;
    readonly norm: number;
    readonly size: number;
}

export function amplitudeProfile(d_b: number, r_max: number, points: number): Float64Array;

export function densityMap(d_b: number, waist: number, separation: number, step: number): DensityView;

export function efficiencyCurve(d_b: number, waist: number, l_max: number, points: number): Float64Array;

/**
 * `[L_opt, eta, F]` at the optimum.
 */
export function optimalSeparation(d_b: number, waist: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_densityview_free: (a: number, b: number) => void;
    readonly amplitudeProfile: (a: number, b: number, c: number) => [number, number, number, number];
    readonly densityMap: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly densityview_extent: (a: number) => [number, number];
    readonly densityview_norm: (a: number) => number;
    readonly densityview_photon: (a: number) => [number, number];
    readonly densityview_size: (a: number) => number;
    readonly densityview_spinWave: (a: number) => [number, number];
    readonly efficiencyCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly optimalSeparation: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
